#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinlab/levelset.hpp"
#include "spinlab/scenario.hpp"
#include "spinlab/spin_curves.hpp"

using namespace spinlab;

namespace {

int failures = 0;

void verdict(bool ok, const std::string& text) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", text.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

void criterion(const char* label, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [ok, detail] = body();
        verdict(ok, std::string(label) + ": " + detail);
    } catch (const std::exception& e) {
        verdict(false, std::string(label) + ": raised " + e.what());
    }
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

const AssertionRow* find_row(const std::vector<AssertionRow>& rows, const std::string& name) {
    for (const AssertionRow& r : rows)
        if (r.name == name)
            return &r;
    return nullptr;
}

std::string failing_names(const std::vector<AssertionRow>& rows) {
    std::string out;
    for (const AssertionRow& r : rows)
        if (!r.pass)
            out += " " + r.name;
    return out.empty() ? std::string(" (all rows green)") : " failing:" + out;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::pair<double, double>> kParamPairs = {{0.0, 2.0}, {1.0, 2.0}, {3.0, 1.0}};

} // namespace

int main() {
    std::printf("acceptance gates (11 criteria)\n");

    // 1. shrinking-sphere benchmark against the closed-form radius law
    criterion("C1 sphere radius law", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const GridSpec g = GridSpec::make(2, 1.6, 201);
        const SphereRun run = run_mcf_sphere(g, 1.0, {0.1, 0.2, 0.3, 0.4});
        double worst = 0.0;
        for (const ScalarField& w : run.snaps) {
            const double rad = mean_front_radius(extract_front(w));
            const double exact = analytic_sphere(1.0, 2, w.time);
            worst = std::max(worst, std::abs(rad - exact) / exact);
        }
        const double secs = elapsed_s(t0);
        const bool ok = worst <= 0.02 && secs < 60.0;
        return std::make_pair(ok, "worst radius rel err " + num(worst) + " (<= 0.02), " +
                                      num(secs) + " s (< 60)");
    });

    // 2. curve-map identity suite across the parameter matrix
    criterion("C2 identity suite", [] {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string bad;
        double worst_norm = 0.0, worst_res = 0.0;
        for (const auto& [a, b] : kParamPairs)
            for (double eps : {0.2, 0.1, 0.05}) {
                const std::vector<AssertionRow> rows = identity_suite(PhysParams::make(a, b, eps));
                for (const AssertionRow& r : rows)
                    if (!r.pass) {
                        ok = false;
                        bad += " " + r.name + "@eps=" + num(eps);
                    }
                if (const AssertionRow* r = find_row(rows, "spin_maps/unit_norm_sup"))
                    worst_norm = std::max(worst_norm, r->measured);
                for (const char* n : {"spin_maps/ode_res1_rel", "spin_maps/ode_res2_rel"})
                    if (const AssertionRow* r = find_row(rows, n))
                        worst_res = std::max(worst_res, r->measured);
            }
        const double secs = elapsed_s(t0);
        if (secs >= 5.0)
            ok = false;
        return std::make_pair(ok, "9 parameter sets, worst unit-norm gap " + num(worst_norm) +
                                      ", worst ode residual " + num(worst_res) + " rel, " +
                                      num(secs) + " s (< 5)" + bad);
    });

    // 3. closed-form peak location vs bisection, plus its small-eps decay
    criterion("C3 critical point", [] {
        bool ok = true;
        double worst_gap = 0.0, worst_margin = -1e300;
        for (const auto& [a, b] : kParamPairs) {
            for (double eps : {0.1, 0.01}) {
                const PhysParams p = PhysParams::make(a, b, eps);
                const double gap = std::abs(critical_point_v3(p) - bisect_critical_point(p));
                worst_gap = std::max(worst_gap, gap / eps);
                if (gap > 1e-10 * eps)
                    ok = false;
            }
            const double eps = 0.01;
            const PhysParams p = PhysParams::make(a, b, eps);
            const double law = eps * std::abs(std::log(0.25 * b * b)) / (4.0 * std::sqrt(a + b));
            const double margin = std::abs(critical_point_v3(p)) - (law + 1e-3 * eps);
            worst_margin = std::max(worst_margin, margin);
            if (margin > 0.0)
                ok = false;
        }
        return std::make_pair(ok, "bisection gap <= " + num(worst_gap) +
                                      "*eps (bound 1e-10*eps), small-eps law slack " +
                                      num(-worst_margin) + " at eps = 0.01");
    });

    // 4. transition-ramp shape suite
    criterion("C4 ramp shape suite", [] {
        const std::vector<AssertionRow> rows = profile_suite(ProfileParams::make(0.2, 0.5));
        bool ok = true;
        for (const AssertionRow& r : rows)
            ok = ok && r.pass;
        return std::make_pair(ok, std::to_string(rows.size()) + " shape checks at (0.2, 0.5)" +
                                      failing_names(rows));
    });

    // 5. curve limits as eps shrinks
    criterion("C5 limit sweep", [] {
        const ScenarioResult res = run_scenario(make_scenario("limit-sweep"));
        return std::make_pair(res.passed, std::to_string(res.rows.size()) +
                                              " rows over eps in {0.2, 0.1, 0.05, 0.02}" +
                                              failing_names(res.rows));
    });

    // 6/7/10 share one planar-steady scenario run
    std::optional<ScenarioResult> planar;
    criterion("C6 planar steady state", [&planar] {
        planar = run_scenario(make_scenario("planar-steady"));
        const AssertionRow* r = find_row(planar->rows, "reaction_diffusion/planar_drift_sup");
        if (!r)
            return std::make_pair(false, std::string("drift row missing"));
        return std::make_pair(r->pass, "interior drift sup " + num(r->measured) +
                                           " after 100 steps (<= " + num(r->bound) + ")");
    });

    criterion("C7 reaction-term routes", [&planar] {
        if (!planar)
            return std::make_pair(false, std::string("planar-steady run unavailable"));
        const AssertionRow* ab = find_row(planar->rows, "reaction_diffusion/routes_ab_rel");
        const AssertionRow* sp = find_row(planar->rows, "reaction_diffusion/routes_cb_spread");
        const AssertionRow* ra = find_row(planar->rows, "reaction_diffusion/routes_cb_ratio");
        if (!ab || !sp || !ra)
            return std::make_pair(false, std::string("route rows missing"));
        const bool ok = ab->pass && sp->pass && ra->pass;
        return std::make_pair(ok, "quotient/simplified gap " + num(ab->measured) +
                                      " rel (<= 1e-10), printed/simplified ratio " +
                                      num(ra->measured) + " with spread " + num(sp->measured) +
                                      " (<= 1e-8)");
    });

    // 8. heat defect of the evolving signed distance
    criterion("C8 heat-defect floor", [] {
        const ScenarioResult res = run_scenario(make_scenario("defect-check"));
        const AssertionRow* m1 = find_row(res.rows, "viscosity_profiles/defect_min_t1");
        const AssertionRow* m2 = find_row(res.rows, "viscosity_profiles/defect_min_t2");
        std::string detail = "rows " + std::to_string(res.rows.size());
        if (m1 && m2)
            detail = "min defect " + num(m1->measured) + " / " + num(m2->measured) +
                     " vs floor " + num(m1->bound) + " at t in {0.1, 0.2}";
        return std::make_pair(res.passed, detail + failing_names(res.rows));
    });

    // 9. sharp-interface capture under the fixed-azimuth curve
    criterion("C9 front-capture asymptotics", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const ScenarioResult res = run_scenario(make_scenario("map2-asymptotics"));
        const double secs = elapsed_s(t0);
        const AssertionRow* di = find_row(res.rows, "reaction_diffusion/dev_inner_final");
        const AssertionRow* dc = find_row(res.rows, "reaction_diffusion/dev_outer_final");
        const AssertionRow* u3 = find_row(res.rows, "reaction_diffusion/near_front_u3_gap");
        const bool ok = res.passed && secs < 600.0;
        std::string detail = "final deviations";
        if (di && dc && u3)
            detail = "deviations at eps = 0.05: inner " + num(di->measured) + ", outer " +
                     num(dc->measured) + " (<= 0.05), near-front u3 gap " + num(u3->measured) +
                     " (<= 0.1)";
        return std::make_pair(ok, detail + ", " + num(secs) + " s (< 600)" +
                                      failing_names(res.rows));
    });

    // 10. residual equivalence under grid refinement
    criterion("C10 residual equivalence", [&planar] {
        if (!planar)
            return std::make_pair(false, std::string("planar-steady run unavailable"));
        bool ok = true;
        std::string ratios;
        for (const char* tag : {"e1", "e2", "c1", "c3"}) {
            const AssertionRow* info =
                find_row(planar->rows, std::string("reaction_diffusion/equiv_ratio_") + tag);
            const AssertionRow* gap =
                find_row(planar->rows, std::string("reaction_diffusion/equiv_ratio_") + tag + "_gap");
            if (!info || !gap) {
                ok = false;
                continue;
            }
            ok = ok && gap->pass;
            ratios += (ratios.empty() ? "" : "/") + num(info->measured);
        }
        const AssertionRow* diff = find_row(planar->rows, "reaction_diffusion/equiv_diff_rel");
        if (!diff || !diff->pass)
            ok = false;
        return std::make_pair(ok, "refinement ratios " + ratios +
                                      " (each within [3.5, 4.5]), cross-form gap " +
                                      num(diff ? diff->measured : -1.0) + " of residual norm (< 1)");
    });

    // 11. ordering of the integrated state between the two drifted ramps
    criterion("C11 sandwich ordering", [] {
        Scenario sc; // defaults: alpha 0, beta 2, eps 0.1, delta 0.2, N 201, dirichlet
        sc.name = "front-capture";
        sc.t_end = 0.1;
        const SandwichRun run = run_sandwich_pipeline(sc);
        const SandwichReport& rep = run.report;
        std::printf("  banded stats (emitted regardless): masked=%ld lower=%ld upper=%ld "
                    "fraction=%.4f | band_nodes=%ld band_lower=%ld band_upper=%ld | "
                    "max_lower_excess=%.4g max_upper_excess=%.4g\n",
                    rep.masked_nodes, rep.lower_violations, rep.upper_violations,
                    rep.violation_fraction, rep.band_nodes, rep.band_lower_violations,
                    rep.band_upper_violations, rep.max_lower_excess, rep.max_upper_excess);
        std::fflush(stdout);
        const bool ok = rep.violation_fraction <= 0.01;
        return std::make_pair(ok, "violation fraction " + num(rep.violation_fraction) +
                                      " of " + std::to_string(rep.masked_nodes) +
                                      " masked nodes (bound 0.01) at t = " + num(run.t));
    });

    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
