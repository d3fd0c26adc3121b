#include "spinlab/spin_curves.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spinlab {

namespace {

// Internal evaluation carries the jet plus a cancellation-free 1 - v3^2
// (computed from the same factored pieces, never as 1 - v3*v3, so it stays
// accurate when v3 approaches +-1).
struct CurveEval {
    CurveJet jet;
    double one_minus_v3sq = 0.0;
};

// Rotating-azimuth curve. With c = cos(eps^2), s = sin(eps^2), x = mu*c*r,
// th = mu*s*r, the raw components are
//   N1 = (a+b) s cos(eps^2 + th) - sin(th) (E - b/2)
//   N2 = (a+b) s sin(eps^2 + th) + cos(th) (E - b/2)
//   N3 = sqrt(2(a+b)) c e^x
//   D  = sqrt(S^2 - a(a+b) c^2),  S = E + a + b/2,  E = e^{2x}
// and v = N / D. Every quantity below is premultiplied by e^{-m} with
// m = max(2x, 0), which caps all exponentials at 1 without changing N/D.
CurveEval eval_rotating(const PhysParams& p, double r) {
    const double c = std::cos(p.epsilon * p.epsilon);
    const double s = std::sin(p.epsilon * p.epsilon);
    const double ab = p.alpha + p.beta;
    const double x = p.mu * c * r;
    const double th = p.mu * s * r;
    const double m = std::max(2.0 * x, 0.0);

    const double G0 = std::exp(-m);       // scale factor itself
    const double F = std::exp(2.0 * x - m); // E * G0
    const double EX = std::exp(-std::abs(x)); // e^x * G0

    const double P = ab * s;
    const double Q = F - 0.5 * p.beta * G0; // (E - b/2) * G0
    const double sin_th = std::sin(th);
    const double cos_th = std::cos(th);
    const double sin_et = std::sin(p.epsilon * p.epsilon + th);
    const double cos_et = std::cos(p.epsilon * p.epsilon + th);

    const double N1 = P * cos_et * G0 - sin_th * Q;
    const double N2 = P * sin_et * G0 + cos_th * Q;
    const double N3 = std::sqrt(2.0 * ab) * c * EX;

    const double S = F + (p.alpha + 0.5 * p.beta) * G0;
    const double D2 = S * S - p.alpha * ab * c * c * G0 * G0;
    const double D = std::sqrt(D2);

    CurveEval out;
    Spin& v = out.jet.v;
    v = {N1 / D, N2 / D, N3 / D};

    // Scaled derivatives of N and D (each is the true derivative times the
    // same e^{-m}, which cancels in the quotient-rule expressions).
    const double mus = p.mu * s;
    const double muc = p.mu * c;
    const double dN1 = -mus * N2 - 2.0 * muc * F * sin_th;
    const double dN2 = mus * N1 + 2.0 * muc * F * cos_th;
    const double dN3 = muc * N3;
    const double dD = 2.0 * muc * F * S / D;

    Spin& d1 = out.jet.d1;
    d1 = {(dN1 - v.v1 * dD) / D, (dN2 - v.v2 * dD) / D, (dN3 - v.v3 * dD) / D};

    const double ddN1 = -mus * dN2 - 4.0 * muc * muc * F * sin_th - 2.0 * muc * mus * F * cos_th;
    const double ddN2 = mus * dN1 + 4.0 * muc * muc * F * cos_th - 2.0 * muc * mus * F * sin_th;
    const double ddN3 = muc * muc * N3;
    const double ddD = (4.0 * muc * muc * F * (S + F) - dD * dD) / D;

    Spin& d2 = out.jet.d2;
    d2 = {(ddN1 - 2.0 * d1.v1 * dD - v.v1 * ddD) / D,
          (ddN2 - 2.0 * d1.v2 * dD - v.v2 * ddD) / D,
          (ddN3 - 2.0 * d1.v3 * dD - v.v3 * ddD) / D};

    // D^2 - N3^2 = N1^2 + N2^2 exactly, so this form has no cancellation.
    out.one_minus_v3sq = (N1 * N1 + N2 * N2) / D2;
    return out;
}

// Fixed-azimuth curve in the plane with angle k. With y = mu*r,
//   p = e^y + (b/2) e^{-y},  g = e^y - (b/2) e^{-y},  W = sqrt(p^2 + 2a)
//   v = (g cos k / W, g sin k / W, sqrt(2(a+b)) / W).
// Scaled by e^{-|y|} throughout.
CurveEval eval_fixed(const PhysParams& p, double k, double r) {
    const double ab = p.alpha + p.beta;
    const double B = 0.5 * p.beta;
    const double y = p.mu * r;
    const double a = std::abs(y);

    const double em = std::exp(-a);
    const double pe = std::exp(y - a);  // e^y  * em
    const double me = std::exp(-y - a); // e^-y * em

    const double pt = pe + B * me;
    const double gt = pe - B * me;
    const double W2 = pt * pt + 2.0 * p.alpha * em * em;
    const double W = std::sqrt(W2);
    const double C = std::sqrt(2.0 * ab);
    const double ck = std::cos(k);
    const double sk = std::sin(k);

    CurveEval out;
    Spin& v = out.jet.v;
    v = {gt * ck / W, gt * sk / W, C * em / W};

    const double W3 = W2 * W;
    const double W5 = W2 * W3;
    const double planar1 = 2.0 * p.mu * ab * pt * em * em / W3;
    Spin& d1 = out.jet.d1;
    d1 = {planar1 * ck, planar1 * sk, -C * p.mu * pt * gt * em / W3};

    const double mu2 = p.mu * p.mu;
    const double planar2 =
        4.0 * mu2 * ab * gt * (p.alpha * em * em - pt * pt) * em * em / W5;
    Spin& d2 = out.jet.d2;
    d2 = {planar2 * ck, planar2 * sk,
          -C * mu2 * ((gt * gt + pt * pt) * W2 - 3.0 * pt * pt * gt * gt) * em / W5};

    // W^2 - 2(a+b) e^{-2|y|} = g^2 exactly.
    out.one_minus_v3sq = gt * gt / W2;
    return out;
}

CurveEval eval_curve(const PhysParams& p, const CurveSpec& spec, double r) {
    if (!std::isfinite(r))
        throw ConfigError("eval_map: r must be finite");
    CurveEval e = spec.kind == CurveKind::RotatingAzimuth
                      ? eval_rotating(p, r)
                      : eval_fixed(p, spec.azimuth, r);
    if (!(std::isfinite(e.jet.v.v1) && std::isfinite(e.jet.v.v2) && std::isfinite(e.jet.v.v3)))
        throw EvalError("eval_map: non-finite value at r = " + std::to_string(r) +
                        ", mu = " + std::to_string(p.mu));
    return e;
}

} // namespace

Spin eval_map(const PhysParams& p, const CurveSpec& spec, double r) {
    return eval_curve(p, spec, r).jet.v;
}

CurveJet eval_map_jet(const PhysParams& p, const CurveSpec& spec, double r) {
    return eval_curve(p, spec, r).jet;
}

MapDerivatives eval_map_derivatives(const PhysParams& p, const CurveSpec& spec, double r) {
    CurveJet j = eval_map_jet(p, spec, r);
    return {j.d1, j.d2.v3};
}

double transverse_norm_sq(const PhysParams& p, const CurveSpec& spec, double r) {
    return eval_curve(p, spec, r).one_minus_v3sq;
}

SpinField map_field(const PhysParams& p, const CurveSpec& spec, const ScalarField& r) {
    SpinField u(r.grid, r.time);
    for (std::size_t i = 0; i < r.values.size(); ++i)
        u.spins[i] = eval_map(p, spec, r.values[i]);
    return u;
}

double wronskian(const PhysParams& p, const CurveSpec& spec, double r) {
    CurveJet j = eval_map_jet(p, spec, r);
    return j.v.v2 * j.d1.v1 - j.v.v1 * j.d1.v2;
}

double exact_wronskian(const PhysParams& p, const CurveSpec& spec) {
    if (spec.kind == CurveKind::RotatingAzimuth)
        return -p.mu * std::sin(p.epsilon * p.epsilon);
    return 0.0;
}

OdeResiduals ode_residuals(const PhysParams& p, const CurveSpec& spec, double r) {
    CurveEval e = eval_curve(p, spec, r);
    if (e.one_minus_v3sq <= 2e-12)
        throw DegeneratePoleError("ode_residuals: |v3| = 1 within 1e-12 at r = " +
                                  std::to_string(r));
    const CurveJet& j = e.jet;

    OdeResiduals out;
    const double t1a = j.v.v2 * j.d2.v1;
    const double t1b = j.v.v1 * j.d2.v2;
    out.res1 = t1a - t1b;
    out.scale1 = std::max({std::abs(t1a), std::abs(t1b), p.mu * p.mu * 1e-6});

    const double wr = exact_wronskian(p, spec);
    const double grad2 = (wr * wr + j.d1.v3 * j.d1.v3) / e.one_minus_v3sq;
    const double reaction = (1.0 / (p.epsilon * p.epsilon)) * j.v.v3 * e.one_minus_v3sq *
                            (p.alpha + p.beta - 2.0 * p.alpha * j.v.v3 * j.v.v3);
    out.res2 = j.d2.v3 + grad2 * j.v.v3 - reaction;
    out.scale2 = std::max({std::abs(j.d2.v3), std::abs(grad2 * j.v.v3), std::abs(reaction),
                           p.mu * p.mu * 1e-6});
    return out;
}

double critical_point_v3(const PhysParams& p) {
    const double e2 = p.epsilon * p.epsilon;
    if (!(e2 < 1.5707963267948966))
        throw ConfigError("critical_point_v3: epsilon^2 must be below pi/2");
    const double c = std::cos(e2);
    const double s = std::sin(e2);
    const double A = (p.alpha + 0.5 * p.beta) * (p.alpha + 0.5 * p.beta) * s * s +
                     0.25 * p.beta * p.beta * c * c;
    return p.epsilon * std::log(A) / (4.0 * std::sqrt(p.alpha + p.beta) * c);
}

Spin front_value(const PhysParams& p) {
    const double root = std::sqrt(8.0 * p.alpha + (2.0 + p.beta) * (2.0 + p.beta));
    return {0.0, (2.0 - p.beta) / root,
            2.0 * std::sqrt(2.0 * (p.alpha + p.beta)) / root};
}

double verify_map_derivatives(const PhysParams& p, const CurveSpec& spec, double r) {
    const CurveJet j = eval_map_jet(p, spec, r);
    const double h = 1e-4 * p.epsilon;

    auto comp = [](const Spin& v, int i) { return i == 0 ? v.v1 : (i == 1 ? v.v2 : v.v3); };
    auto d1_fd = [&](double step, int i) {
        return (comp(eval_map(p, spec, r + step), i) - comp(eval_map(p, spec, r - step), i)) /
               (2.0 * step);
    };
    auto d2_fd = [&](double step, int i) {
        return (comp(eval_map(p, spec, r + step), i) - 2.0 * comp(eval_map(p, spec, r), i) +
                comp(eval_map(p, spec, r - step), i)) /
               (step * step);
    };

    // Deviations are measured against the derivative's natural scale (the
    // components are bounded by 1, so d1 is O(mu) and d2 is O(mu^2)); a
    // pointwise-relative measure would just amplify finite-difference
    // roundoff wherever the analytic value crosses zero.
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        // Two Richardson levels: error drops from O(h^2) to O(h^4).
        const double fd = (4.0 * d1_fd(0.5 * h, i) - d1_fd(h, i)) / 3.0;
        const double an = comp(j.d1, i);
        worst = std::max(worst, std::abs(an - fd) / std::max(std::abs(an), p.mu));
    }
    const double fd2 = (4.0 * d2_fd(0.5 * h, 2) - d2_fd(h, 2)) / 3.0;
    const double denom2 = std::max(std::abs(j.d2.v3), p.mu * p.mu);
    worst = std::max(worst, std::abs(j.d2.v3 - fd2) / denom2);

    if (worst > 1e-4)
        throw TranscriptionError("closed-form derivative deviates from finite differences by " +
                                 std::to_string(worst) + " (relative) at r = " +
                                 std::to_string(r));
    return worst;
}

} // namespace spinlab
