#pragma once

#include <cmath>

namespace spinlab {

// A point on (or near) the unit sphere S^2. Plain aggregate; arithmetic is
// provided for the handful of vector identities the residual checks need.
struct Spin {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;

    double norm2() const { return v1 * v1 + v2 * v2 + v3 * v3; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Spin operator+(Spin a, Spin b) { return {a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3}; }
inline Spin operator-(Spin a, Spin b) { return {a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3}; }
inline Spin operator*(double s, Spin a) { return {s * a.v1, s * a.v2, s * a.v3}; }

inline double dot(Spin a, Spin b) { return a.v1 * b.v1 + a.v2 * b.v2 + a.v3 * b.v3; }

inline Spin cross(Spin a, Spin b) {
    return {a.v2 * b.v3 - a.v3 * b.v2,
            a.v3 * b.v1 - a.v1 * b.v3,
            a.v1 * b.v2 - a.v2 * b.v1};
}

// Value together with first and second derivatives along the transverse
// coordinate; everything downstream (residuals, Wronskians) consumes this.
struct CurveJet {
    Spin v;
    Spin d1;
    Spin d2;
};

} // namespace spinlab
