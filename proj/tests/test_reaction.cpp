#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "spinlab/reaction.hpp"

using namespace spinlab;

namespace {

ScalarField planar(const GridSpec& g) {
    ScalarField r(g);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        std::size_t rest = i;
        for (int a = g.dim - 1; a > 0; --a)
            rest /= g.n;
        r.values[i] = g.coord(static_cast<int>(rest));
    }
    return r;
}

SpinField constant_equator(const GridSpec& g) {
    SpinField u(g);
    for (Spin& s : u.spins)
        s = Spin{1.0, 0.0, 0.0};
    return u;
}

} // namespace

TEST_CASE("reaction term zeros, sign, and saturation") {
    const PhysParams p = PhysParams::make(0.0, 2.0, 0.1);

    CHECK(reduced_rhs(p, 0.37, 1.0) == 0.0);  // unit gradient kills the term
    CHECK(reduced_rhs(p, 0.0, 0.0) == 0.0);   // tanh zero at the origin when beta = 2

    const double r5 = 5.0 / p.mu;
    CHECK(reduced_rhs(p, r5, 0.0) ==
          doctest::Approx(p.mu * std::tanh(p.mu * r5)).epsilon(1e-12));
    CHECK(reduced_rhs(p, r5, 0.0) == doctest::Approx(14.14).epsilon(1e-2));

    // far saturation stays finite
    CHECK(std::abs(reduced_rhs(p, 40.0, 0.0)) <= 1.01 * p.mu);
    CHECK(std::abs(reduced_rhs(p, -40.0, 0.0)) <= 1.01 * p.mu);

    for (const PhysParams& q :
         {PhysParams::make(0.0, 2.0, 0.1), PhysParams::make(1.0, 2.0, 0.1)})
        for (double r : {-1.0, -0.2, -0.05, 0.05, 0.2, 1.0})
            CHECK(reduced_rhs(q, r, 0.0) * r > 0.0);

    CHECK_THROWS_AS(reduced_rhs(p, std::numeric_limits<double>::quiet_NaN(), 0.0), EvalError);
    CHECK_THROWS_AS(reduced_rhs(p, 0.1, std::numeric_limits<double>::infinity()), EvalError);
}

TEST_CASE("the three reaction routes agree up to the printed constant") {
    const PhysParams p = PhysParams::make(0.0, 2.0, 0.1);
    const RhsRoutes rt = rhs_routes(p, 0.05, 0.0);
    CHECK(std::abs(rt.quotient / rt.simplified - 1.0) <= 1e-10);
    CHECK(rt.printed / rt.simplified == doctest::Approx(4.0).epsilon(1e-8));

    // all routes vanish together at the tanh zero
    const PhysParams pb = PhysParams::make(0.0, 1.0, 0.1);
    const double rstar = 0.5 * std::log(0.5) / pb.mu;
    const RhsRoutes rz = rhs_routes(pb, rstar, 0.0);
    CHECK(std::abs(rz.simplified) <= 1e-12 * pb.mu);
    CHECK(std::abs(rz.quotient) <= 1e-12 * pb.mu);
    CHECK(std::abs(rz.printed) <= 1e-11 * pb.mu);

    CHECK_THROWS_AS(rhs_routes(p, 35.0 / p.mu, 0.0), ConfigError); // printed route overflow guard

    for (const PhysParams& q : {PhysParams::make(0.0, 2.0, 0.1),
                                PhysParams::make(1.0, 2.0, 0.1),
                                PhysParams::make(3.0, 1.0, 0.05)}) {
        std::vector<double> samples;
        for (double m : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0}) {
            samples.push_back(m / q.mu);
            samples.push_back(-m / q.mu);
        }
        const ConsistencyReport rep = rhs_consistency(q, samples);
        CHECK(rep.samples == static_cast<long>(samples.size()));
        CHECK(rep.max_ab_rel <= 1e-10);
        CHECK(rep.ratio_cb == doctest::Approx(2.0 * (q.alpha + q.beta)).epsilon(1e-8));
        CHECK(rep.ratio_cb_spread <= 1e-8);
    }
    CHECK_THROWS_AS(rhs_consistency(p, {}), ConfigError);
}

TEST_CASE("explicit step ceiling takes the smaller of the two bounds") {
    const GridSpec g1 = GridSpec::make(1, 1.6, 81); // h = 0.04
    const PhysParams p = PhysParams::make(0.0, 2.0, 0.1);
    CHECK(reaction_max_dt(p, g1) == doctest::Approx(0.2 * 0.04 * 0.04 / 2.0).epsilon(1e-14));

    const PhysParams tight = PhysParams::make(0.0, 2.0, 0.02);
    CHECK(reaction_max_dt(tight, g1) == doctest::Approx(0.1 * 4e-4 / 2.0).epsilon(1e-14));

    const GridSpec g2 = GridSpec::make(2, 1.6, 41); // h = 0.08
    CHECK(reaction_max_dt(p, g2) == doctest::Approx(0.2 * 0.08 * 0.08 / 4.0).epsilon(1e-14));
}

TEST_CASE("solver fixed points, snapshots, and failure modes") {
    const PhysParams p = PhysParams::make(0.0, 2.0, 0.1);
    const GridSpec g = GridSpec::make(1, 1.6, 41);
    const double dt = reaction_max_dt(p, g);

    SUBCASE("the zero state is stationary when beta = 2") {
        const ScalarField r0(g, 0.0);
        SolverConfig cfg{dt, 10.0 * dt, BoundaryKind::DirichletFarField, 1e3};
        const std::vector<ScalarField> out = solve(p, r0, cfg, {0.0, cfg.t_end});
        REQUIRE(out.size() == 2);
        for (double v : out[0].values)
            CHECK(v == 0.0);
        for (double v : out[1].values)
            CHECK(v == 0.0);
        CHECK(out[0].time == 0.0);
        CHECK(out[1].time == doctest::Approx(cfg.t_end).epsilon(1e-12));
    }

    SUBCASE("stability and config guards") {
        const ScalarField r0(g, 0.0);
        SolverConfig bad{2.5 * dt, 10.0 * dt, BoundaryKind::DirichletFarField, 1e3};
        CHECK_THROWS_AS(solve(p, r0, bad, {}), StabilityError);
        SolverConfig neg{dt, -1.0, BoundaryKind::DirichletFarField, 1e3};
        CHECK_THROWS_AS(solve(p, r0, neg, {}), ConfigError);
        SolverConfig ok{dt, 10.0 * dt, BoundaryKind::DirichletFarField, 1e3};
        CHECK_THROWS_AS(solve(p, r0, ok, {20.0 * dt}), ConfigError);
        CHECK_THROWS_AS(solve(p, r0, ok, {-dt}), ConfigError);
    }

    SUBCASE("super-threshold growth raises a blowup naming the step") {
        const ScalarField r0(g, 0.6);
        SolverConfig cfg{dt, 1.0, BoundaryKind::Reflective, 1.0};
        CHECK_THROWS_WITH_AS(solve(p, r0, cfg, {}),
                             doctest::Contains("step"), BlowupError);
    }
}

TEST_CASE("a unit ramp is a discrete steady state") {
    const PhysParams p = PhysParams::make(0.0, 2.0, 0.1);

    for (int dim : {1, 2}) {
        const GridSpec g = GridSpec::make(dim, 1.6, dim == 1 ? 81 : 41);
        const ScalarField r0 = planar(g);
        const double dt = reaction_max_dt(p, g);
        SolverConfig cfg{dt, 50.0 * dt, BoundaryKind::DirichletFarField, 1e3};
        const ScalarField rT = solve(p, r0, cfg, {cfg.t_end})[0];
        double drift = 0.0;
        for (std::size_t i = 0; i < rT.values.size(); ++i)
            drift = std::max(drift, std::abs(rT.values[i] - r0.values[i]));
        CHECK(drift <= 1e-9);
    }
}

TEST_CASE("spin residuals vanish on a constant equator state") {
    const PhysParams p = PhysParams::make(1.0, 2.0, 0.1);
    const GridSpec g = GridSpec::make(2, 1.6, 21);
    const SpinField u = constant_equator(g);
    const LLResidualReport rep = ll_residual(p, u, u, 1e-3);
    CHECK(rep.masked_nodes == 19 * 19);
    CHECK(rep.sup_e1 == 0.0);
    CHECK(rep.sup_e2 == 0.0);
    CHECK(rep.sup_cross1 == 0.0);
    CHECK(rep.sup_cross3 == 0.0);
    CHECK(rep.diff1_sup == 0.0);
    CHECK(rep.diff3_sup == 0.0);
    CHECK_THROWS_AS(ll_residual(p, u, u, 0.0), ConfigError);
}

TEST_CASE("steady-lift residuals shrink at second order under refinement") {
    const PhysParams p = PhysParams::make(0.0, 2.0, 0.1);
    const CurveSpec spec = CurveSpec::rotating();

    auto residual_at = [&](int n) {
        const GridSpec g = GridSpec::make(2, 1.6, n);
        const SpinField u = lift_spin(p, spec, planar(g));
        return ll_residual(p, u, u, 1e-3);
    };
    const LLResidualReport coarse = residual_at(81);
    const LLResidualReport fine = residual_at(161);

    CHECK(coarse.masked_nodes == 79 * 79);
    CHECK(fine.masked_nodes == 159 * 159);
    for (double ratio : {coarse.sup_e1 / fine.sup_e1, coarse.sup_e2 / fine.sup_e2,
                         coarse.sup_cross1 / fine.sup_cross1,
                         coarse.sup_cross3 / fine.sup_cross3}) {
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.0);
    }
    // both routes to each residual agree far below the residuals themselves
    CHECK(fine.diff1_sup <= 1e-9 * (1.0 + fine.sup_e1));
    CHECK(fine.diff3_sup <= 1e-9 * (1.0 + fine.sup_e2));
}

TEST_CASE("angle-equation residual reports without asserting") {
    const PhysParams p = PhysParams::make(0.0, 2.0, 0.1);
    const GridSpec g = GridSpec::make(2, 1.6, 41);
    const ScalarField r0 = planar(g);
    const ACResidualReport rep = allen_cahn_residual(p, r0, r0, 1e-3);
    CHECK(rep.masked_nodes == 39 * 39);
    CHECK(std::isfinite(rep.sup));
    CHECK(rep.sup >= 0.0);
    CHECK_THROWS_AS(allen_cahn_residual(p, r0, r0, -1.0), ConfigError);
}

TEST_CASE("asymptotic probe masks, deviations, and probe nodes") {
    const GridSpec g = GridSpec::make(1, 1.6, 21); // h = 0.16
    SpinField u = constant_equator(g);
    ScalarField w(g);
    for (int i = 0; i < g.n; ++i)
        w.values[i] = g.coord(i);

    const Spin inner{1.0, 0.0, 0.0};
    const Spin outer{-1.0, 0.0, 0.0};

    ProbeResult pr = asymptotic_probe(u, w, 0.15, inner, outer);
    CHECK(pr.inner_nodes == 10);
    CHECK(pr.outer_nodes == 10);
    CHECK(pr.max_dev_inner == 0.0);
    CHECK(pr.max_dev_outer == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pr.min_absw_index == 10);
    CHECK(pr.u_at_min_absw.v1 == 1.0);
    CHECK(pr.u_at_max_u3.v3 == 0.0);

    u.spins[13] = Spin{1.0, 0.0, 0.5};
    pr = asymptotic_probe(u, w, 0.15, inner, outer);
    CHECK(pr.max_dev_inner == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pr.max_u3_index == 13);
    CHECK(pr.u_at_max_u3.v3 == 0.5);

    CHECK_THROWS_AS(asymptotic_probe(u, w, 2.0, inner, outer), ConfigError);
    CHECK_THROWS_AS(asymptotic_probe(u, w, -0.1, inner, outer), ConfigError);
}
