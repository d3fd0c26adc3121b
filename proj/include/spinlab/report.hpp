#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spinlab/grid.hpp"
#include "spinlab/profiles.hpp"

namespace spinlab {

// One checked quantity: measured value against its bound. The name is a
// stable identifier (module/check form) so downstream diffs are meaningful.
struct AssertionRow {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Shortest round-trippable decimal form (%.17g).
std::string format_full(double v);

// Header `name,measured,bound,pass`; values in %.17g, pass as 1/0.
// Deterministic: identical rows give bit-identical bytes.
void write_summary_csv(const std::filesystem::path& path, const std::vector<AssertionRow>& rows);

// Header `x1,...,x<dim>,value`, one row per node in storage order (first
// axis slowest).
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);

// Header `t,node_index,kind,value,bound`.
void write_violations_csv(const std::filesystem::path& path,
                          const std::vector<ViolationRow>& rows);

// Header `t,radius,exact,rel_err`.
struct RadiusSample {
    double t = 0.0;
    double radius = 0.0;
    double exact = 0.0;
};
void write_radius_csv(const std::filesystem::path& path, const std::vector<RadiusSample>& rows);

} // namespace spinlab
