#pragma once

#include <cstddef>
#include <vector>

#include "spinlab/grid.hpp"
#include "spinlab/params.hpp"
#include "spinlab/spin_curves.hpp"

namespace spinlab {

enum class BoundaryKind { DirichletFarField, Reflective };

struct SolverConfig {
    double dt = 0.0;
    double t_end = 0.0;
    BoundaryKind boundary = BoundaryKind::DirichletFarField;
    double blowup_threshold = 1e3;
};

// Stability ceiling for the explicit scheme: the diffusion bound
// 0.2 h^2 / (2 dim) and the reaction bound 0.1 eps^2 / (alpha + beta),
// whichever is smaller.
double reaction_max_dt(const PhysParams& p, const GridSpec& grid);

// Reaction term of the reduced scalar equation r_t = lap(r) + G(r, |grad r|^2)
// under the fixed-azimuth curve:
//   G = mu (1 - grad_sq) tanh(mu r - ln(beta/2)/2) * (P^2 - 2a)/(P^2 + 2a)
// with P = e^{mu r} + (beta/2) e^{-mu r}, evaluated overflow-safe. Vanishes
// when grad_sq = 1, and at the tanh zero.
double reduced_rhs(const PhysParams& p, double r, double grad_sq);

// Three routes to the same reaction value:
//   quotient    — the curve-jet form -(1/eps^2)(1-gs) v3 (1-v3^2)(a+b-2a v3^2) / v3'
//   simplified  — reduced_rhs
//   printed     — the 2 mu (a+b) * tanh * rational-coefficient variant,
//                 evaluated with direct exponentials (needs |mu r| <= 30)
struct RhsRoutes {
    double quotient = 0.0;
    double simplified = 0.0;
    double printed = 0.0;
};
RhsRoutes rhs_routes(const PhysParams& p, double r, double grad_sq);

// Evaluates all routes on the sample set (grad_sq = 0). quotient and
// simplified must agree to 1e-10 relative at every sample or a
// DerivationError aborts the run. The printed/simplified ratio is reported:
// its mean and its spread across samples (the ratio is expected to be the
// constant 2(alpha+beta)).
struct ConsistencyReport {
    double max_ab_rel = 0.0;
    double ratio_cb = 0.0;        // mean of printed/simplified over usable samples
    double ratio_cb_spread = 0.0; // max |ratio - mean| / |mean|
    long samples = 0;
};
ConsistencyReport rhs_consistency(const PhysParams& p, const std::vector<double>& r_samples);

// Forward-Euler integration of r_t = lap(r) + G(r, |grad r|^2) with central
// differences. DirichletFarField pins every boundary node to its r0 value;
// Reflective mirrors across the boundary. Returns the states at the
// requested times, each rounded to the nearest step (snapshot time = step
// count times dt). Throws BlowupError when the sup norm passes
// cfg.blowup_threshold and DivergenceError on non-finite values, both naming
// the step index.
std::vector<ScalarField> solve(const PhysParams& p, const ScalarField& r0,
                               const SolverConfig& cfg, const std::vector<double>& snapshot_times);

// Nodewise curve evaluation of a solution field.
SpinField lift_spin(const PhysParams& p, const CurveSpec& spec, const ScalarField& r);

// Discrete residuals of the two scalar equations governing the spin field,
// evaluated at the midpoint of two consecutive states:
//   e1 = u2 u1_t - u1 u2_t - (u2 lap u1 - u1 lap u2)
//   e2 = u3_t - lap u3 - |grad u|^2 u3 + (1/eps^2) u3 (1-u3^2)(a+b-2a u3^2)
// plus the same quantities computed independently from the cross-product
// form R = u_t + (u.F)u - F with F = lap u - H(u)/eps^2:
//   cross1 = u2 R1 - u1 R2,  cross3 = R3.
// Nodes with |u3| >= 1 - 1e-6 (and boundary nodes) are masked out.
struct LLResidualReport {
    ScalarField e1, e2, cross1, cross3;
    std::vector<unsigned char> mask;
    long masked_nodes = 0;
    double sup_e1 = 0.0, sup_e2 = 0.0;
    double sup_cross1 = 0.0, sup_cross3 = 0.0;
    double diff1_sup = 0.0; // sup |cross1 - e1| over the mask
    double diff3_sup = 0.0; // sup |cross3 - e2| over the mask
};
LLResidualReport ll_residual(const PhysParams& p, const SpinField& u_prev,
                             const SpinField& u_next, double dt);

// Residual of the scalar angle equation for omega = arcsin(v3(r)):
//   omega_t - lap omega + (1/eps^2) sin(omega) cos(omega) (a+b-2a sin^2 omega)
// Report-only: the angle equation drops the |grad r|^2 coupling, so this is
// small only where that coupling is inactive. Nodes where v3 leaves the
// arcsin domain are masked.
struct ACResidualReport {
    ScalarField residual;
    std::vector<unsigned char> mask;
    long masked_nodes = 0;
    double sup = 0.0;
};
ACResidualReport allen_cahn_residual(const PhysParams& p, const ScalarField& r_prev,
                                     const ScalarField& r_next, double dt);

// Deviation of a spin field from prescribed limits on the inner mask
// {w > margin} and outer mask {w < -margin}, plus the spin at two
// front-adjacent probe nodes: the u3 maximizer (transition-layer center) and
// the |w| minimizer. Throws ConfigError when either mask is empty.
struct ProbeResult {
    double max_dev_inner = 0.0;
    double max_dev_outer = 0.0;
    long inner_nodes = 0;
    long outer_nodes = 0;
    Spin u_at_max_u3;
    std::size_t max_u3_index = 0;
    Spin u_at_min_absw;
    std::size_t min_absw_index = 0;
};
ProbeResult asymptotic_probe(const SpinField& u, const ScalarField& w, double margin,
                             const Spin& limit_inner, const Spin& limit_outer);

} // namespace spinlab
