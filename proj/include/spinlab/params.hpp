#pragma once

#include <cmath>
#include <string>

#include "spinlab/errors.hpp"

namespace spinlab {

// Anisotropy pair (alpha, beta) plus the interface-width parameter epsilon.
// mu = sqrt(alpha + beta) / epsilon is the reciprocal length scale that shows
// up everywhere; we cache it so call sites never re-derive it inconsistently.
struct PhysParams {
    double alpha = 0.0;
    double beta = 2.0;
    double epsilon = 0.1;
    double mu = 0.0;

    static PhysParams make(double alpha, double beta, double epsilon) {
        if (!(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(epsilon)))
            throw ConfigError("PhysParams: non-finite input");
        if (!(alpha >= 0.0))
            throw ConfigError("PhysParams: alpha must be >= 0, got " + std::to_string(alpha));
        if (!(beta > 0.0))
            throw ConfigError("PhysParams: beta must be > 0, got " + std::to_string(beta));
        if (!(alpha + beta > 0.0))
            throw ConfigError("PhysParams: alpha + beta must be > 0");
        if (!(epsilon > 0.0 && epsilon <= 0.5))
            throw ConfigError("PhysParams: epsilon must lie in (0, 0.5], got " +
                              std::to_string(epsilon));
        PhysParams p;
        p.alpha = alpha;
        p.beta = beta;
        p.epsilon = epsilon;
        p.mu = std::sqrt(alpha + beta) / epsilon;
        return p;
    }
};

// Ramp geometry: delta is the band width, t_star the extinction time of the
// reference shrinking front. The constraint below keeps the band edge real.
struct ProfileParams {
    double delta = 0.2;
    double t_star = 0.5;

    static ProfileParams make(double delta, double t_star) {
        if (!(std::isfinite(delta) && std::isfinite(t_star)))
            throw ConfigError("ProfileParams: non-finite input");
        if (!(t_star > 0.0))
            throw ConfigError("ProfileParams: t_star must be > 0");
        if (!(delta > 0.0 && delta * delta < 24.0 * t_star))
            throw ConfigError("ProfileParams: need 0 < delta < sqrt(24 t_star), got delta = " +
                              std::to_string(delta));
        return ProfileParams{delta, t_star};
    }

    // Speed at which the super/sub ramps translate in time.
    double drift_rate() const { return delta / (4.0 * t_star); }
};

} // namespace spinlab
