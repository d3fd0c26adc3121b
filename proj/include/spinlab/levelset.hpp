#pragma once

#include <array>
#include <utility>
#include <vector>

#include "spinlab/grid.hpp"

namespace spinlab {

// Cone h(x) = R - |x|: positive inside the ball of radius R, zero on its
// boundary, negative outside. Requires 0 < R < 0.8 * half_width so the front
// has room to move without touching the box.
ScalarField build_initial_height(const GridSpec& grid, double R);

// Regularization for the |grad w|^2 denominator: 1e-6 * (value range) / h.
double default_mcf_sigma(const ScalarField& w);

// Largest stable explicit step for the curvature operator: 0.2 h^2 / (2 dim).
double mcf_max_dt(const GridSpec& grid);

// One forward-Euler step of w_t = lap(w) - w_i w_j w_ij / (|grad w|^2 + sigma^2)
// with central differences and reflective (mirror) boundaries.
ScalarField mcf_step(const ScalarField& w, double dt, double sigma);

// n_steps explicit steps from w0. Returns the fields at the requested step
// indices, in order (an index equal to n_steps returns the final state; 0 the
// initial one). Each snapshot's time is its exact step count times dt.
std::vector<ScalarField> mcf_evolve(const ScalarField& w0, double dt, double sigma,
                                    long n_steps, const std::vector<long>& snapshot_steps);

// Zero level set. dim=1: crossing coordinates as points. dim=2: marching
// squares; points are edge crossings, segments index into points. dim=3:
// edge-crossing point cloud, no connectivity.
struct FrontPolyline {
    int dim = 0;
    std::vector<std::array<double, 3>> points; // unused coordinates are zero
    std::vector<std::pair<int, int>> segments; // dim=2 only
    bool empty() const { return points.empty(); }
};

// Linear-interpolation zero crossings of w. An empty result is valid and
// means the front is extinct.
FrontPolyline extract_front(const ScalarField& w);

// Largest |w| interpolated at the front's points, for validating that stored
// points really sit on the zero level set.
double max_front_residual(const ScalarField& w, const FrontPolyline& front);

// Brute-force distance from every node to the front, signed by sign(w).
ScalarField signed_distance(const FrontPolyline& front, const ScalarField& w);

// Shrinking-sphere law R(t) = sqrt(R0^2 - 2 (dim-1) t); dim=1 is stationary.
// Throws ExtinctFrontError past the extinction time R0^2 / (2 (dim-1)).
double analytic_sphere(double R0, int dim, double t);

// Mean distance of the front's points from the origin.
double mean_front_radius(const FrontPolyline& front);

// Symmetric Hausdorff distance between the two fronts' point/segment sets.
double hausdorff_distance(const FrontPolyline& a, const FrontPolyline& b);

} // namespace spinlab
