#pragma once

#include "spinlab/params.hpp"

namespace spinlab {

// Piecewise ramp eta: constant -5*delta/8 below delta/4, a quartic blend on
// [delta/4, delta/2], and z - delta above delta/2. C^2 everywhere; the third
// derivative jumps at the two junctions.
double eta(const ProfileParams& pp, double z);

double eta_d1(const ProfileParams& pp, double z);
double eta_d2(const ProfileParams& pp, double z);

// Third derivative. Undefined at z == delta/4 and z == delta/2 (the one-sided
// values differ); exact hits throw JunctionPointError.
double eta_d3(const ProfileParams& pp, double z);

// Right edge of the slope band: 3*delta/8 + (delta/8) * sqrt(1 - delta^2/(24 t*)).
double band_edge(const ProfileParams& pp);

// a_delta = eta'(band_edge); the slope bound on (delta/4, band_edge], < 1.
double band_bound(const ProfileParams& pp);

} // namespace spinlab
