#include "spinlab/profiles.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spinlab/transition_profile.hpp"

namespace spinlab {

namespace {

void check_profile_time(const ProfileParams& pp, double t, const char* who) {
    if (!std::isfinite(t) || t < 0.0 || t > pp.t_star)
        throw ConfigError(std::string(who) + ": t = " + std::to_string(t) +
                          " outside [0, t* = " + std::to_string(pp.t_star) + "]");
}

} // namespace

ProfileField super_profile(const ScalarField& d, const ProfileParams& pp, double t) {
    check_profile_time(pp, t, "super_profile");
    ProfileField out{ScalarField(d.grid, 0.0, t), d, ProfileKind::Super, pp, t};
    const double drift = pp.drift_rate() * t;
    for (std::size_t i = 0; i < d.values.size(); ++i)
        out.r.values[i] = eta(pp, d.values[i]) + drift;
    return out;
}

ProfileField sub_profile(const ScalarField& d, const ProfileParams& pp, double t) {
    check_profile_time(pp, t, "sub_profile");
    ProfileField out{ScalarField(d.grid, 0.0, t), d, ProfileKind::Sub, pp, t};
    const double drift = pp.drift_rate() * t;
    for (std::size_t i = 0; i < d.values.size(); ++i)
        out.r.values[i] = -eta(pp, -d.values[i]) - drift;
    return out;
}

SpinField compose_spin(const PhysParams& p, const CurveSpec& spec, const ProfileField& rf) {
    return map_field(p, spec, rf.r);
}

HeatDefectReport heat_defect(const ScalarField& d_prev, const ScalarField& d_next, double dt,
                             const ProfileParams& pp) {
    require_same_grid(d_prev.grid, d_next.grid, "heat_defect");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("heat_defect: dt must be positive and finite");

    const GridSpec& g = d_prev.grid;
    const int n = g.n;
    const double h = g.h();
    const double inv_h2 = 1.0 / (h * h);

    ScalarField ep(g), en(g);
    for (std::size_t i = 0; i < ep.values.size(); ++i) {
        ep.values[i] = eta(pp, d_prev.values[i]);
        en.values[i] = eta(pp, d_next.values[i]);
    }

    HeatDefectReport rep;
    rep.defect = ScalarField(g, 0.0, d_next.time);
    rep.mask.assign(g.total(), 0);
    rep.bound = -6.0 / pp.delta;
    rep.tol = 10.0 * h / (pp.delta * pp.delta);
    rep.min_defect = std::numeric_limits<double>::infinity();

    std::size_t stride[3] = {1, 1, 1};
    for (int a = g.dim - 2; a >= 0; --a)
        stride[a] = stride[a + 1] * static_cast<std::size_t>(n);

    int idx[3] = {0, 0, 0};
    const std::size_t total = g.total();
    for (std::size_t lin = 0; lin < total; ++lin) {
        bool interior = true;
        double radius2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            if (idx[a] == 0 || idx[a] == n - 1)
                interior = false;
            const double x = g.coord(idx[a]);
            radius2 += x * x;
        }
        if (interior && std::abs(d_prev.values[lin]) > 2.0 * h &&
            std::abs(d_next.values[lin]) > 2.0 * h && radius2 > 4.0 * h * h) {
            double lap_p = 0.0, lap_n = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const std::size_t s = stride[a];
                lap_p += ep.values[lin + s] - 2.0 * ep.values[lin] + ep.values[lin - s];
                lap_n += en.values[lin + s] - 2.0 * en.values[lin] + en.values[lin - s];
            }
            const double defect = (en.values[lin] - ep.values[lin]) / dt -
                                  0.5 * (lap_p + lap_n) * inv_h2;
            rep.defect.values[lin] = defect;
            rep.mask[lin] = 1;
            ++rep.masked_nodes;
            rep.min_defect = std::min(rep.min_defect, defect);
            if (defect < rep.bound - rep.tol)
                rep.flagged.push_back({lin, defect});
        }
        // advance the multi-index (last axis fastest)
        for (int a = g.dim - 1; a >= 0; --a) {
            if (++idx[a] < n)
                break;
            idx[a] = 0;
        }
    }
    if (rep.masked_nodes == 0)
        rep.min_defect = 0.0;
    return rep;
}

SandwichReport sandwich_check(const ScalarField& rminus, const ScalarField& r,
                              const ScalarField& rplus, const ProfileParams& pp) {
    require_same_grid(rminus.grid, r.grid, "sandwich_check");
    require_same_grid(r.grid, rplus.grid, "sandwich_check");

    const double d4 = 0.25 * pp.delta;
    const double d2 = 0.5 * pp.delta;
    SandwichReport rep;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const double lo = rminus.values[i];
        const double hi = rplus.values[i];
        const double mid = r.values[i];
        const bool in_band = (hi >= d4 && hi <= d2) || (lo >= -d2 && lo <= -d4);
        const bool below = mid < lo;
        const bool above = mid > hi;
        if (in_band) {
            ++rep.band_nodes;
            rep.band_lower_violations += below ? 1 : 0;
            rep.band_upper_violations += above ? 1 : 0;
            continue;
        }
        ++rep.masked_nodes;
        if (below) {
            ++rep.lower_violations;
            rep.max_lower_excess = std::max(rep.max_lower_excess, lo - mid);
            rep.rows.push_back({r.time, i, "lower", mid, lo});
        }
        if (above) {
            ++rep.upper_violations;
            rep.max_upper_excess = std::max(rep.max_upper_excess, mid - hi);
            rep.rows.push_back({r.time, i, "upper", mid, hi});
        }
    }
    if (rep.masked_nodes > 0)
        rep.violation_fraction =
            static_cast<double>(rep.lower_violations + rep.upper_violations) /
            static_cast<double>(rep.masked_nodes);
    return rep;
}

} // namespace spinlab
