#include "spinlab/transition_profile.hpp"

#include <cmath>
#include <string>

namespace spinlab {

double eta(const ProfileParams& pp, double z) {
    if (!std::isfinite(z))
        throw ConfigError("eta: z must be finite");
    const double d = pp.delta;
    if (z <= 0.25 * d)
        return -0.625 * d;
    if (z >= 0.5 * d)
        return z - d;
    // Quartic in t = z/delta keeps the coefficients O(1) on the band.
    const double t = z / d;
    return d * ((((-32.0 * t + 48.0) * t - 24.0) * t + 5.0) * t - 1.0);
}

double eta_d1(const ProfileParams& pp, double z) {
    if (!std::isfinite(z))
        throw ConfigError("eta_d1: z must be finite");
    const double d = pp.delta;
    if (z <= 0.25 * d)
        return 0.0;
    if (z >= 0.5 * d)
        return 1.0;
    // Factored form: exact zero at delta/4, no cancellation across the band.
    const double u = z - 0.25 * d;
    return (16.0 / (d * d)) * u * u * (5.0 - 8.0 * z / d);
}

double eta_d2(const ProfileParams& pp, double z) {
    if (!std::isfinite(z))
        throw ConfigError("eta_d2: z must be finite");
    const double d = pp.delta;
    if (z <= 0.25 * d || z >= 0.5 * d)
        return 0.0;
    return (192.0 / (d * d)) * (z - 0.25 * d) * (1.0 - 2.0 * z / d);
}

double eta_d3(const ProfileParams& pp, double z) {
    if (!std::isfinite(z))
        throw ConfigError("eta_d3: z must be finite");
    const double d = pp.delta;
    if (z == 0.25 * d || z == 0.5 * d)
        throw JunctionPointError("eta_d3: third derivative jumps at z = " + std::to_string(z));
    if (z < 0.25 * d || z > 0.5 * d)
        return 0.0;
    return (96.0 / (d * d)) * (3.0 - 8.0 * z / d);
}

double band_edge(const ProfileParams& pp) {
    const double d = pp.delta;
    return 0.375 * d + 0.125 * d * std::sqrt(1.0 - d * d / (24.0 * pp.t_star));
}

double band_bound(const ProfileParams& pp) {
    return eta_d1(pp, band_edge(pp));
}

} // namespace spinlab
