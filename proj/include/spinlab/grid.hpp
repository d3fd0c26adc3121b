#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spinlab/errors.hpp"
#include "spinlab/spin.hpp"

namespace spinlab {

// Uniform axis-aligned grid on [-L, L]^dim with an odd point count per axis,
// so the origin is always a node. Storage is row-major with the FIRST axis
// slowest: dim=2 index = i1*n + i2, dim=3 index = (i1*n + i2)*n + i3.
struct GridSpec {
    int dim = 2;
    double half_width = 1.6;
    int n = 201;

    static GridSpec make(int dim, double half_width, int n) {
        if (dim < 1 || dim > 3)
            throw ConfigError("GridSpec: dim must be 1, 2, or 3");
        if (n < 3 || n % 2 == 0)
            throw ConfigError("GridSpec: n must be odd and >= 3, got " + std::to_string(n));
        if (!(half_width > 0.0))
            throw ConfigError("GridSpec: half_width must be > 0");
        return GridSpec{dim, half_width, n};
    }

    double h() const { return 2.0 * half_width / (n - 1); }

    std::size_t total() const {
        std::size_t t = 1;
        for (int a = 0; a < dim; ++a)
            t *= static_cast<std::size_t>(n);
        return t;
    }

    double coord(int i) const { return -half_width + i * h(); }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && half_width == o.half_width && n == o.n;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

struct ScalarField {
    GridSpec grid;
    std::vector<double> values;
    double time = 0.0;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0, double t = 0.0)
        : grid(g), values(g.total(), fill), time(t) {}
};

struct SpinField {
    GridSpec grid;
    std::vector<Spin> spins;
    double time = 0.0;

    SpinField() = default;
    explicit SpinField(const GridSpec& g, double t = 0.0)
        : grid(g), spins(g.total()), time(t) {}
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (a != b)
        throw GridMismatchError(std::string(where) + ": fields live on different grids");
}

} // namespace spinlab
