#include "spinlab/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spinlab {

double reaction_max_dt(const PhysParams& p, const GridSpec& grid) {
    const double h = grid.h();
    return std::min(0.2 * h * h / (2.0 * grid.dim),
                    0.1 * p.epsilon * p.epsilon / (p.alpha + p.beta));
}

double reduced_rhs(const PhysParams& p, double r, double grad_sq) {
    if (!std::isfinite(r) || !std::isfinite(grad_sq))
        throw EvalError("reduced_rhs: non-finite input");
    const double th = std::tanh(p.mu * r - 0.5 * std::log(0.5 * p.beta));
    double frac = 1.0;
    if (p.alpha > 0.0) {
        // (P^2 - 2a) / (P^2 + 2a) with the dominant exponential scaled out.
        const double y = p.mu * r;
        const double a = std::abs(y);
        const double em = std::exp(-a);
        const double pt = std::exp(y - a) + 0.5 * p.beta * std::exp(-y - a);
        const double p2 = pt * pt;
        const double a2 = 2.0 * p.alpha * em * em;
        frac = (p2 - a2) / (p2 + a2);
    }
    const double g = p.mu * (1.0 - grad_sq) * th * frac;
    if (!std::isfinite(g))
        throw EvalError("reduced_rhs: non-finite value at r = " + std::to_string(r));
    return g;
}

RhsRoutes rhs_routes(const PhysParams& p, double r, double grad_sq) {
    RhsRoutes out;
    out.simplified = reduced_rhs(p, r, grad_sq);

    // Quotient route: solve the curve-ODE form for r_t - lap(r) using the
    // fixed-azimuth jet. The 0/0 at the v3 peak has limit 0 (the numerator
    // carries an extra factor of the same root).
    const CurveSpec spec = CurveSpec::fixed(0.0);
    const CurveJet j = eval_map_jet(p, spec, r);
    const double one_minus = transverse_norm_sq(p, spec, r);
    const double fac = p.alpha + p.beta - 2.0 * p.alpha * j.v.v3 * j.v.v3;
    const double num =
        -(1.0 / (p.epsilon * p.epsilon)) * (1.0 - grad_sq) * j.v.v3 * one_minus * fac;
    out.quotient = j.d1.v3 == 0.0 ? 0.0 : num / j.d1.v3;

    // Printed-coefficient route, kept deliberately naive (plain exponentials)
    // so it stays an independent reading of the same endpoint formula.
    const double y = p.mu * r;
    if (std::abs(y) > 30.0)
        throw ConfigError("rhs_routes: printed-form route needs |mu r| <= 30, got " +
                          std::to_string(y));
    const double B = 0.5 * p.beta;
    const double P = std::exp(y) + B * std::exp(-y);
    const double Q = std::exp(y) - B * std::exp(-y);
    out.printed = 2.0 * p.mu * (p.alpha + p.beta) * (1.0 - grad_sq) * (Q / P) *
                  (P * P - 2.0 * p.alpha) / (P * P + 2.0 * p.alpha);
    return out;
}

ConsistencyReport rhs_consistency(const PhysParams& p, const std::vector<double>& r_samples) {
    if (r_samples.empty())
        throw ConfigError("rhs_consistency: empty sample set");
    ConsistencyReport rep;
    std::vector<double> ratios;
    ratios.reserve(r_samples.size());
    for (double r : r_samples) {
        const RhsRoutes rr = rhs_routes(p, r, 0.0);
        const double denom = std::max(std::abs(rr.quotient), std::abs(rr.simplified));
        const double dev = denom == 0.0 ? 0.0 : std::abs(rr.quotient - rr.simplified) / denom;
        rep.max_ab_rel = std::max(rep.max_ab_rel, dev);
        if (dev > 1e-10)
            throw DerivationError("rhs_consistency: quotient and simplified reaction forms "
                                  "deviate by " +
                                  std::to_string(dev) + " (relative) at r = " + std::to_string(r));
        if (std::abs(rr.simplified) > 1e-12 * p.mu)
            ratios.push_back(rr.printed / rr.simplified);
        ++rep.samples;
    }
    if (!ratios.empty()) {
        double sum = 0.0;
        for (double q : ratios)
            sum += q;
        rep.ratio_cb = sum / static_cast<double>(ratios.size());
        for (double q : ratios)
            rep.ratio_cb_spread =
                std::max(rep.ratio_cb_spread, std::abs(q - rep.ratio_cb) / std::abs(rep.ratio_cb));
    }
    return rep;
}

namespace {

inline int mirror(int i, int n) {
    if (i < 0)
        return -i;
    if (i >= n)
        return 2 * n - 2 - i;
    return i;
}

void reaction_step(const PhysParams& p, const ScalarField& r, const ScalarField& r0,
                   BoundaryKind bc, double dt, ScalarField& out) {
    const GridSpec& g = r.grid;
    const int n = g.n;
    const double h = g.h();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 0.5 / h;
    const double* src = r.values.data();
    double* dst = out.values.data();
    const bool pin = bc == BoundaryKind::DirichletFarField;

    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            if (pin && (i == 0 || i == n - 1)) {
                dst[i] = r0.values[i];
                continue;
            }
            const int e = mirror(i + 1, n), w = mirror(i - 1, n);
            const double gx = (src[e] - src[w]) * inv_2h;
            const double lap = (src[e] - 2.0 * src[i] + src[w]) * inv_h2;
            dst[i] = src[i] + dt * (lap + reduced_rhs(p, src[i], gx * gx));
        }
    } else if (g.dim == 2) {
        auto update = [&](int i1, int i2) {
            const std::size_t c = static_cast<std::size_t>(i1) * n + i2;
            if (pin && (i1 == 0 || i1 == n - 1 || i2 == 0 || i2 == n - 1)) {
                dst[c] = r0.values[c];
                return;
            }
            const int e1 = mirror(i1 + 1, n), w1 = mirror(i1 - 1, n);
            const int e2 = mirror(i2 + 1, n), w2 = mirror(i2 - 1, n);
            const double vE = src[static_cast<std::size_t>(e1) * n + i2];
            const double vW = src[static_cast<std::size_t>(w1) * n + i2];
            const double vN = src[static_cast<std::size_t>(i1) * n + e2];
            const double vS = src[static_cast<std::size_t>(i1) * n + w2];
            const double vc = src[c];
            const double gx = (vE - vW) * inv_2h;
            const double gy = (vN - vS) * inv_2h;
            const double lap = (vE + vW + vN + vS - 4.0 * vc) * inv_h2;
            dst[c] = vc + dt * (lap + reduced_rhs(p, vc, gx * gx + gy * gy));
        };
        for (int i1 = 1; i1 + 1 < n; ++i1) {
            const double* rowC = src + static_cast<std::size_t>(i1) * n;
            const double* rowE = rowC + n;
            const double* rowW = rowC - n;
            double* rowD = dst + static_cast<std::size_t>(i1) * n;
            for (int i2 = 1; i2 + 1 < n; ++i2) {
                const double vc = rowC[i2];
                const double gx = (rowE[i2] - rowW[i2]) * inv_2h;
                const double gy = (rowC[i2 + 1] - rowC[i2 - 1]) * inv_2h;
                const double lap =
                    (rowE[i2] + rowW[i2] + rowC[i2 + 1] + rowC[i2 - 1] - 4.0 * vc) * inv_h2;
                rowD[i2] = vc + dt * (lap + reduced_rhs(p, vc, gx * gx + gy * gy));
            }
        }
        for (int i1 = 0; i1 < n; ++i1) {
            update(i1, 0);
            update(i1, n - 1);
        }
        for (int i2 = 1; i2 + 1 < n; ++i2) {
            update(0, i2);
            update(n - 1, i2);
        }
    } else {
        const std::size_t sn = static_cast<std::size_t>(n);
        auto at = [&](int a, int b, int c3) {
            return src[(static_cast<std::size_t>(a) * sn + b) * sn + c3];
        };
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) {
                    const std::size_t c = (static_cast<std::size_t>(i1) * sn + i2) * sn + i3;
                    if (pin && (i1 == 0 || i1 == n - 1 || i2 == 0 || i2 == n - 1 || i3 == 0 ||
                                i3 == n - 1)) {
                        dst[c] = r0.values[c];
                        continue;
                    }
                    const int p1 = mirror(i1 + 1, n), m1 = mirror(i1 - 1, n);
                    const int p2 = mirror(i2 + 1, n), m2 = mirror(i2 - 1, n);
                    const int p3 = mirror(i3 + 1, n), m3 = mirror(i3 - 1, n);
                    const double vc = at(i1, i2, i3);
                    const double g1 = (at(p1, i2, i3) - at(m1, i2, i3)) * inv_2h;
                    const double g2 = (at(i1, p2, i3) - at(i1, m2, i3)) * inv_2h;
                    const double g3 = (at(i1, i2, p3) - at(i1, i2, m3)) * inv_2h;
                    const double lap = (at(p1, i2, i3) + at(m1, i2, i3) + at(i1, p2, i3) +
                                        at(i1, m2, i3) + at(i1, i2, p3) + at(i1, i2, m3) -
                                        6.0 * vc) *
                                       inv_h2;
                    dst[c] = vc + dt * (lap + reduced_rhs(p, vc, g1 * g1 + g2 * g2 + g3 * g3));
                }
    }
}

} // namespace

std::vector<ScalarField> solve(const PhysParams& p, const ScalarField& r0,
                               const SolverConfig& cfg,
                               const std::vector<double>& snapshot_times) {
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
        throw ConfigError("solve: t_end must be positive and finite");
    if (!(cfg.blowup_threshold > 0.0) || !std::isfinite(cfg.blowup_threshold))
        throw ConfigError("solve: blowup_threshold must be positive and finite");
    const double dt_max = reaction_max_dt(p, r0.grid);
    if (!(cfg.dt > 0.0) || cfg.dt > dt_max * (1.0 + 1e-12))
        throw StabilityError("solve: dt = " + std::to_string(cfg.dt) +
                             " exceeds the stable bound " + std::to_string(dt_max));
    for (double v : r0.values)
        if (!std::isfinite(v))
            throw ConfigError("solve: r0 has non-finite values");

    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    std::vector<long> snap_steps;
    snap_steps.reserve(snapshot_times.size());
    for (double t : snapshot_times) {
        const long k = std::llround(t / cfg.dt);
        if (k < 0 || k > n_steps)
            throw ConfigError("solve: snapshot time " + std::to_string(t) +
                              " outside the run [0, " + std::to_string(n_steps * cfg.dt) + "]");
        snap_steps.push_back(k);
    }

    std::vector<ScalarField> shots;
    shots.reserve(snap_steps.size());
    auto want = [&](long k) {
        return std::find(snap_steps.begin(), snap_steps.end(), k) != snap_steps.end();
    };

    ScalarField cur = r0;
    cur.time = 0.0;
    ScalarField next(r0.grid);
    if (want(0))
        shots.push_back(cur);
    for (long k = 1; k <= n_steps; ++k) {
        reaction_step(p, cur, r0, cfg.boundary, cfg.dt, next);
        next.time = static_cast<double>(k) * cfg.dt;
        double sup = 0.0;
        for (double v : next.values) {
            if (!std::isfinite(v))
                throw DivergenceError("solve: non-finite value at step " + std::to_string(k));
            sup = std::max(sup, std::abs(v));
        }
        if (sup > cfg.blowup_threshold)
            throw BlowupError("solve: sup norm " + std::to_string(sup) +
                              " exceeds blowup threshold at step " + std::to_string(k));
        std::swap(cur, next);
        if (want(k))
            shots.push_back(cur);
    }
    return shots;
}

SpinField lift_spin(const PhysParams& p, const CurveSpec& spec, const ScalarField& r) {
    return map_field(p, spec, r);
}

LLResidualReport ll_residual(const PhysParams& p, const SpinField& u_prev,
                             const SpinField& u_next, double dt) {
    require_same_grid(u_prev.grid, u_next.grid, "ll_residual");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("ll_residual: dt must be positive and finite");

    const GridSpec& g = u_prev.grid;
    const int n = g.n;
    const double h = g.h();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_e2 = 1.0 / (p.epsilon * p.epsilon);

    SpinField mid(g, 0.5 * (u_prev.time + u_next.time));
    for (std::size_t i = 0; i < mid.spins.size(); ++i)
        mid.spins[i] = 0.5 * (u_prev.spins[i] + u_next.spins[i]);

    LLResidualReport rep;
    rep.e1 = ScalarField(g, 0.0, u_next.time);
    rep.e2 = rep.e1;
    rep.cross1 = rep.e1;
    rep.cross3 = rep.e1;
    rep.mask.assign(g.total(), 0);

    std::size_t stride[3] = {1, 1, 1};
    for (int a = g.dim - 2; a >= 0; --a)
        stride[a] = stride[a + 1] * static_cast<std::size_t>(n);

    int idx[3] = {0, 0, 0};
    const std::size_t total = g.total();
    for (std::size_t lin = 0; lin < total; ++lin) {
        bool interior = true;
        for (int a = 0; a < g.dim; ++a)
            if (idx[a] == 0 || idx[a] == n - 1)
                interior = false;
        const Spin& u = mid.spins[lin];
        if (interior && std::abs(u.v3) < 1.0 - 1e-6) {
            Spin lap{0.0, 0.0, 0.0};
            double grad_sq = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const std::size_t s = stride[a];
                const Spin& fwd = mid.spins[lin + s];
                const Spin& bwd = mid.spins[lin - s];
                lap = lap + inv_h2 * (fwd + bwd - 2.0 * u);
                // Half-point gradient: with unit nodes this pairs with the
                // second difference so that u . lap u + |grad u|^2 cancels
                // exactly, matching the continuum identity behind the
                // two-formulation equivalence.
                grad_sq += 0.5 * inv_h2 * ((fwd - u).norm2() + (u - bwd).norm2());
            }
            const Spin ut = (1.0 / dt) * (u_next.spins[lin] - u_prev.spins[lin]);

            const double u3sq = u.v3 * u.v3;
            const double fac = p.alpha + p.beta - 2.0 * p.alpha * u3sq;
            const double e1 = u.v2 * ut.v1 - u.v1 * ut.v2 - (u.v2 * lap.v1 - u.v1 * lap.v2);
            const double e2 =
                ut.v3 - lap.v3 - grad_sq * u.v3 + inv_e2 * u.v3 * (1.0 - u3sq) * fac;

            const Spin H{p.alpha * u.v1 * u3sq, p.alpha * u.v2 * u3sq,
                         p.alpha * u.v1 * u.v1 * u.v3 + p.alpha * u.v2 * u.v2 * u.v3 +
                             p.beta * u.v3};
            const Spin F = lap - inv_e2 * H;
            const double udotF = dot(u, F);
            const Spin R = ut + udotF * u - F;
            const double c1 = u.v2 * R.v1 - u.v1 * R.v2;
            const double c3 = R.v3;

            rep.e1.values[lin] = e1;
            rep.e2.values[lin] = e2;
            rep.cross1.values[lin] = c1;
            rep.cross3.values[lin] = c3;
            rep.mask[lin] = 1;
            ++rep.masked_nodes;
            rep.sup_e1 = std::max(rep.sup_e1, std::abs(e1));
            rep.sup_e2 = std::max(rep.sup_e2, std::abs(e2));
            rep.sup_cross1 = std::max(rep.sup_cross1, std::abs(c1));
            rep.sup_cross3 = std::max(rep.sup_cross3, std::abs(c3));
            rep.diff1_sup = std::max(rep.diff1_sup, std::abs(c1 - e1));
            rep.diff3_sup = std::max(rep.diff3_sup, std::abs(c3 - e2));
        }
        for (int a = g.dim - 1; a >= 0; --a) {
            if (++idx[a] < n)
                break;
            idx[a] = 0;
        }
    }
    return rep;
}

ACResidualReport allen_cahn_residual(const PhysParams& p, const ScalarField& r_prev,
                                     const ScalarField& r_next, double dt) {
    require_same_grid(r_prev.grid, r_next.grid, "allen_cahn_residual");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("allen_cahn_residual: dt must be positive and finite");

    const GridSpec& g = r_prev.grid;
    const int n = g.n;
    const double inv_h2 = 1.0 / (g.h() * g.h());
    const double inv_e2 = 1.0 / (p.epsilon * p.epsilon);
    const CurveSpec spec = CurveSpec::fixed(0.0);

    // Angle fields; an entry outside the arcsin domain poisons its node.
    const std::size_t total = g.total();
    std::vector<double> wp(total), wn(total);
    std::vector<unsigned char> ok(total, 1);
    for (std::size_t i = 0; i < total; ++i) {
        const double a = eval_map(p, spec, r_prev.values[i]).v3;
        const double b = eval_map(p, spec, r_next.values[i]).v3;
        if (std::abs(a) > 1.0 + 1e-12 || std::abs(b) > 1.0 + 1e-12) {
            ok[i] = 0;
            continue;
        }
        wp[i] = std::asin(std::clamp(a, -1.0, 1.0));
        wn[i] = std::asin(std::clamp(b, -1.0, 1.0));
    }

    ACResidualReport rep;
    rep.residual = ScalarField(g, 0.0, r_next.time);
    rep.mask.assign(total, 0);

    std::size_t stride[3] = {1, 1, 1};
    for (int a = g.dim - 2; a >= 0; --a)
        stride[a] = stride[a + 1] * static_cast<std::size_t>(n);

    int idx[3] = {0, 0, 0};
    for (std::size_t lin = 0; lin < total; ++lin) {
        bool usable = ok[lin] != 0;
        for (int a = 0; a < g.dim && usable; ++a) {
            if (idx[a] == 0 || idx[a] == n - 1)
                usable = false;
            else
                usable = ok[lin + stride[a]] && ok[lin - stride[a]];
        }
        if (usable) {
            double lap = 0.0;
            for (int a = 0; a < g.dim; ++a) {
                const std::size_t s = stride[a];
                lap += 0.5 * (wp[lin + s] - 2.0 * wp[lin] + wp[lin - s] + wn[lin + s] -
                              2.0 * wn[lin] + wn[lin - s]);
            }
            lap *= inv_h2;
            const double om = 0.5 * (wp[lin] + wn[lin]);
            const double so = std::sin(om), co = std::cos(om);
            const double res = (wn[lin] - wp[lin]) / dt - lap +
                               inv_e2 * so * co * (p.alpha + p.beta - 2.0 * p.alpha * so * so);
            rep.residual.values[lin] = res;
            rep.mask[lin] = 1;
            ++rep.masked_nodes;
            rep.sup = std::max(rep.sup, std::abs(res));
        }
        for (int a = g.dim - 1; a >= 0; --a) {
            if (++idx[a] < n)
                break;
            idx[a] = 0;
        }
    }
    return rep;
}

ProbeResult asymptotic_probe(const SpinField& u, const ScalarField& w, double margin,
                             const Spin& limit_inner, const Spin& limit_outer) {
    require_same_grid(u.grid, w.grid, "asymptotic_probe");
    if (!(margin > 0.0) || !std::isfinite(margin))
        throw ConfigError("asymptotic_probe: margin must be positive and finite");

    ProbeResult pr;
    double best_u3 = -std::numeric_limits<double>::infinity();
    double best_absw = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.spins.size(); ++i) {
        const Spin& s = u.spins[i];
        const double wv = w.values[i];
        if (wv > margin) {
            ++pr.inner_nodes;
            pr.max_dev_inner = std::max(pr.max_dev_inner, (s - limit_inner).norm());
        } else if (wv < -margin) {
            ++pr.outer_nodes;
            pr.max_dev_outer = std::max(pr.max_dev_outer, (s - limit_outer).norm());
        }
        if (s.v3 > best_u3) {
            best_u3 = s.v3;
            pr.u_at_max_u3 = s;
            pr.max_u3_index = i;
        }
        if (std::abs(wv) < best_absw) {
            best_absw = std::abs(wv);
            pr.u_at_min_absw = s;
            pr.min_absw_index = i;
        }
    }
    if (pr.inner_nodes == 0 || pr.outer_nodes == 0)
        throw ConfigError("asymptotic_probe: margin " + std::to_string(margin) +
                          " leaves an empty mask");
    return pr;
}

} // namespace spinlab
