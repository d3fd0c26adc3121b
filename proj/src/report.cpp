#include "spinlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace spinlab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary); // binary: no newline translation
    if (!out)
        throw ConfigError("cannot open " + path.string() + " for writing");
    return out;
}

} // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<AssertionRow>& rows) {
    auto out = open_out(path);
    out << "name,measured,bound,pass\n";
    for (const auto& r : rows)
        out << r.name << ',' << format_full(r.measured) << ',' << format_full(r.bound) << ','
            << (r.pass ? 1 : 0) << '\n';
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
    auto out = open_out(path);
    const GridSpec& g = f.grid;
    for (int a = 1; a <= g.dim; ++a)
        out << 'x' << a << ',';
    out << "value\n";
    int idx[3] = {0, 0, 0};
    for (std::size_t lin = 0; lin < f.values.size(); ++lin) {
        for (int a = 0; a < g.dim; ++a)
            out << format_full(g.coord(idx[a])) << ',';
        out << format_full(f.values[lin]) << '\n';
        for (int a = g.dim - 1; a >= 0; --a) {
            if (++idx[a] < g.n)
                break;
            idx[a] = 0;
        }
    }
}

void write_violations_csv(const std::filesystem::path& path,
                          const std::vector<ViolationRow>& rows) {
    auto out = open_out(path);
    out << "t,node_index,kind,value,bound\n";
    for (const auto& r : rows)
        out << format_full(r.t) << ',' << r.node_index << ',' << r.kind << ','
            << format_full(r.value) << ',' << format_full(r.bound) << '\n';
}

void write_radius_csv(const std::filesystem::path& path, const std::vector<RadiusSample>& rows) {
    auto out = open_out(path);
    out << "t,radius,exact,rel_err\n";
    for (const auto& r : rows)
        out << format_full(r.t) << ',' << format_full(r.radius) << ',' << format_full(r.exact)
            << ',' << format_full(std::abs(r.radius - r.exact) / std::abs(r.exact)) << '\n';
}

} // namespace spinlab
