#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spinlab/levelset.hpp"
#include "spinlab/profiles.hpp"
#include "spinlab/reaction.hpp"
#include "spinlab/report.hpp"

namespace spinlab {

// Fully resolved experiment description. Load order: name-specific defaults,
// then the JSON config file, then CLI overrides.
struct Scenario {
    std::string name = "identities";
    double alpha = 0.0;
    double beta = 2.0;
    double epsilon = 0.1;
    int dim = 2;
    double half_width = 1.6;
    int grid_n = 201;
    double radius = 1.0; // initial front radius
    double delta = 0.2;
    double t_star = 0.0; // <= 0: analytic extinction time of the sphere
    double t_end = 0.0;
    double dt = 0.0; // <= 0: automatic, from the stability bound
    std::string boundary = "dirichlet";
    double blowup_threshold = 1e3;
    double margin = 0.15;
    double azimuth = 0.0; // curve plane angle k
    std::string out_dir;  // empty: artifacts/<name>

    PhysParams phys() const { return PhysParams::make(alpha, beta, epsilon); }
    double extinction_time() const;
    ProfileParams prof() const { return ProfileParams::make(delta, extinction_time()); }
    GridSpec gspec() const { return GridSpec::make(dim, half_width, grid_n); }
    BoundaryKind boundary_kind() const;
};

const std::vector<std::string>& scenario_names();

// Name-specific defaults (sweep scenarios use a smaller band and reflective
// boundaries; see README).
Scenario make_scenario(const std::string& name);

// Single top-level JSON object; unknown keys are rejected.
Scenario load_scenario(const std::filesystem::path& config_path);

struct ScenarioResult {
    std::vector<AssertionRow> rows;
    std::vector<std::string> artifacts;
    bool passed = true;
};

// Runs the named pipeline and writes summary.csv, manifest.json, and any
// field artifacts under out_dir.
ScenarioResult run_scenario(const Scenario& sc);

// ---- building blocks shared with the test suite ----

// Step count for integrating to t_end with dt as close to (but under)
// dt_max as an integer division allows; dt_out = t_end / steps.
long steps_for(double t_end, double dt_max, double& dt_out);

// Log-spaced |mu r| magnitudes in [lo, hi], per_sign points per sign,
// negative values first. Deterministic (no RNG).
std::vector<double> log_sweep_mur(int per_sign, double lo, double hi);

// Root of v3' for the rotating curve by sign scan plus bisection, used as
// the independent oracle for the closed-form critical point.
double bisect_critical_point(const PhysParams& p);

// Row bundles reused by scenarios and the acceptance suite.
std::vector<AssertionRow> identity_suite(const PhysParams& p);
std::vector<AssertionRow> profile_suite(const ProfileParams& pp);

// Curvature-flow sphere run with snapshots at the requested times, each
// rounded to the nearest step.
struct SphereRun {
    double dt = 0.0;
    double sigma = 0.0;
    std::vector<ScalarField> snaps;
};
SphereRun run_mcf_sphere(const GridSpec& grid, double R, const std::vector<double>& times);

/// End-to-end ordering check at time sc.t_end: evolve the front, build the
// comparison ramps from the evolved distance field, integrate the reduced
// scalar equation from eta(d0), and compare. The report is returned raw so
// callers decide whether its fraction is an assertion or a statistic.
struct SandwichRun {
    SandwichReport report;
    double t = 0.0;       // comparison time
    double dt = 0.0;      // reaction-solver step actually used
    long steps = 0;
};
SandwichRun run_sandwich_pipeline(const Scenario& sc);

} // namespace spinlab
