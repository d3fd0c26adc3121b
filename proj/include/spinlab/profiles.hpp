#pragma once

#include <cstddef>
#include <vector>

#include "spinlab/grid.hpp"
#include "spinlab/params.hpp"
#include "spinlab/spin_curves.hpp"

namespace spinlab {

enum class ProfileKind { Super, Sub };

// Comparison profile r(x, t) built from a signed-distance field:
//   Super: r = eta(d) + (delta / (4 t*)) t
//   Sub:   r = -eta(-d) - (delta / (4 t*)) t
// The source distance field is kept so the construction can be re-audited.
struct ProfileField {
    ScalarField r;
    ScalarField d;
    ProfileKind kind = ProfileKind::Super;
    ProfileParams pp;
    double t = 0.0;
};

// Throws ConfigError when t is outside [0, t*].
ProfileField super_profile(const ScalarField& d, const ProfileParams& pp, double t);
ProfileField sub_profile(const ScalarField& d, const ProfileParams& pp, double t);

// Nodewise curve evaluation of the profile values.
SpinField compose_spin(const PhysParams& p, const CurveSpec& spec, const ProfileField& rf);

struct FlaggedNode {
    std::size_t node_index = 0;
    double value = 0.0;
};

// Central-difference estimate of eta(d)_t - lap(eta(d)) between two
// consecutive distance fields, evaluated where d is smooth: strictly interior
// nodes with |d| > 2h at both times and |x| > 2h (distance fields kink at the
// front's polyline corners, at the skeleton, and at the origin).
struct HeatDefectReport {
    ScalarField defect;              // 0 at masked-out nodes
    std::vector<unsigned char> mask; // 1 where evaluated
    long masked_nodes = 0;
    double min_defect = 0.0; // over the mask
    double bound = 0.0;      // -6 / delta
    double tol = 0.0;        // 10 h / delta^2, truncation allowance
    std::vector<FlaggedNode> flagged; // nodes with defect < bound - tol
};

HeatDefectReport heat_defect(const ScalarField& d_prev, const ScalarField& d_next, double dt,
                             const ProfileParams& pp);

struct ViolationRow {
    double t = 0.0;
    std::size_t node_index = 0;
    const char* kind = ""; // "lower" (r < r-) or "upper" (r > r+)
    double value = 0.0;
    double bound = 0.0;
};

// Ordering check r- <= r <= r+. Nodes where r+ sits in [delta/4, delta/2] or
// r- sits in [-delta/2, -delta/4] are tallied separately (the comparison
// argument excludes those bands), so the headline fraction covers only nodes
// outside both bands.
struct SandwichReport {
    long masked_nodes = 0;
    long lower_violations = 0;
    long upper_violations = 0;
    long band_nodes = 0;
    long band_lower_violations = 0;
    long band_upper_violations = 0;
    double violation_fraction = 0.0; // (lower + upper) / masked_nodes
    double max_lower_excess = 0.0;   // max(r- - r) over masked violations
    double max_upper_excess = 0.0;   // max(r - r+) over masked violations
    std::vector<ViolationRow> rows;  // masked violations only
};

SandwichReport sandwich_check(const ScalarField& rminus, const ScalarField& r,
                              const ScalarField& rplus, const ProfileParams& pp);

} // namespace spinlab
