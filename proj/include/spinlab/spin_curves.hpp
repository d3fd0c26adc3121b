#pragma once

#include "spinlab/grid.hpp"
#include "spinlab/params.hpp"
#include "spinlab/spin.hpp"

namespace spinlab {

// Two explicit unit-sphere curves parameterized by a single transverse
// coordinate r. The rotating-azimuth curve spirals in the (v1, v2) plane as r
// moves; the fixed-azimuth curve stays in the vertical plane with azimuth k.
enum class CurveKind {
    RotatingAzimuth,
    FixedAzimuth,
};

struct CurveSpec {
    CurveKind kind = CurveKind::FixedAzimuth;
    double azimuth = 0.0; // angle k of the vertical plane; ignored when rotating

    static CurveSpec rotating() { return {CurveKind::RotatingAzimuth, 0.0}; }
    static CurveSpec fixed(double k) {
        if (!std::isfinite(k))
            throw ConfigError("CurveSpec: azimuth k must be finite");
        return {CurveKind::FixedAzimuth, k};
    }
};

// Point on the curve. Overflow-safe for any finite r (the dominant
// exponential is factored out of every ratio before it is formed).
Spin eval_map(const PhysParams& p, const CurveSpec& spec, double r);

// Value plus first and second derivatives in r, all closed-form.
CurveJet eval_map_jet(const PhysParams& p, const CurveSpec& spec, double r);

// The (dv, ddv3) slice of the jet.
struct MapDerivatives {
    Spin d1;
    double d2v3 = 0.0;
};
MapDerivatives eval_map_derivatives(const PhysParams& p, const CurveSpec& spec, double r);

// v2 v1' - v1 v2' computed from the jet.
double wronskian(const PhysParams& p, const CurveSpec& spec, double r);

// The constant the Wronskian equals for the given curve:
// -mu sin(eps^2) for the rotating curve, 0 for the fixed one.
double exact_wronskian(const PhysParams& p, const CurveSpec& spec);

// Residuals of the governing ODE system, plus the magnitude of the largest
// contributing term of each equation so callers can form relative errors.
// res2 uses the reconstruction |v'|^2 = (W^2 + v3'^2) / (1 - v3^2) with W the
// exact Wronskian constant, which is why |v3| = 1 is a hard error here.
struct OdeResiduals {
    double res1 = 0.0;
    double res2 = 0.0;
    double scale1 = 0.0;
    double scale2 = 0.0;
};
OdeResiduals ode_residuals(const PhysParams& p, const CurveSpec& spec, double r);

// The unique r where v3 of the rotating curve peaks (v3'(r*) = 0).
double critical_point_v3(const PhysParams& p);

// Transition value the curves approach at r = 0 as epsilon -> 0:
// (0, (2-beta)/s, 2 sqrt(2(alpha+beta))/s) with s = sqrt(8 alpha + (2+beta)^2).
Spin front_value(const PhysParams& p);

// v1^2 + v2^2 = 1 - v3^2 in a form that stays accurate when |v3| is close
// to 1 (no subtraction of nearly equal quantities).
double transverse_norm_sq(const PhysParams& p, const CurveSpec& spec, double r);

// Nodewise eval_map over a scalar field of curve parameters.
SpinField map_field(const PhysParams& p, const CurveSpec& spec, const ScalarField& r);

// Richardson finite-difference cross-check of the closed-form derivatives.
// Returns the worst relative deviation over (v1', v2', v3', v3''); throws
// TranscriptionError beyond 1e-4. Central differences with base step
// 1e-4 * epsilon and two extrapolation levels.
double verify_map_derivatives(const PhysParams& p, const CurveSpec& spec, double r);

} // namespace spinlab
