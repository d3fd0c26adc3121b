#include "spinlab/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spinlab {

namespace {

// Reflective boundary: index -1 maps to 1, n maps to n-2.
inline int mirror(int i, int n) {
    if (i < 0)
        return -i;
    if (i >= n)
        return 2 * n - 2 - i;
    return i;
}

void check_positive_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ConfigError("mcf_step: sigma must be positive and finite");
}

} // namespace

ScalarField build_initial_height(const GridSpec& grid, double R) {
    if (!(R > 0.0 && R < 0.8 * grid.half_width))
        throw ConfigError("build_initial_height: need 0 < R < 0.8 * half_width, got R = " +
                          std::to_string(R));
    ScalarField w(grid);
    const int n = grid.n;
    if (grid.dim == 1) {
        for (int i = 0; i < n; ++i)
            w.values[i] = R - std::abs(grid.coord(i));
    } else if (grid.dim == 2) {
        for (int i1 = 0; i1 < n; ++i1) {
            const double x1 = grid.coord(i1);
            for (int i2 = 0; i2 < n; ++i2) {
                const double x2 = grid.coord(i2);
                w.values[static_cast<std::size_t>(i1) * n + i2] =
                    R - std::sqrt(x1 * x1 + x2 * x2);
            }
        }
    } else {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) {
                    const double x1 = grid.coord(i1);
                    const double x2 = grid.coord(i2);
                    const double x3 = grid.coord(i3);
                    w.values[(static_cast<std::size_t>(i1) * n + i2) * n + i3] =
                        R - std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
                }
    }
    return w;
}

double default_mcf_sigma(const ScalarField& w) {
    const auto [lo, hi] = std::minmax_element(w.values.begin(), w.values.end());
    const double range = *hi - *lo;
    if (!(range > 0.0))
        throw ConfigError("default_mcf_sigma: field has zero range");
    return 1e-6 * range / w.grid.h();
}

double mcf_max_dt(const GridSpec& grid) { return 0.2 * grid.h() * grid.h() / (2.0 * grid.dim); }

ScalarField mcf_step(const ScalarField& w, double dt, double sigma) {
    check_positive_sigma(sigma);
    if (!(dt > 0.0) || dt > mcf_max_dt(w.grid) * (1.0 + 1e-12))
        throw StabilityError("mcf_step: dt = " + std::to_string(dt) + " exceeds the stable bound " +
                             std::to_string(mcf_max_dt(w.grid)));

    const GridSpec& g = w.grid;
    const int n = g.n;
    const double h = g.h();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 0.5 / h;
    const double s2 = sigma * sigma;
    ScalarField out(g, 0.0, w.time + dt);
    const double* src = w.values.data();
    double* dst = out.values.data();

    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            const double c = src[i];
            const double e = src[mirror(i + 1, n)];
            const double ww = src[mirror(i - 1, n)];
            const double wx = (e - ww) * inv_2h;
            const double wxx = (e - 2.0 * c + ww) * inv_h2;
            const double num = wx * wx * wxx;
            dst[i] = c + dt * (wxx - num / (wx * wx + s2));
        }
    } else if (g.dim == 2) {
        auto update = [&](int i1, int i2) {
            const int e1 = mirror(i1 + 1, n), w1 = mirror(i1 - 1, n);
            const int e2 = mirror(i2 + 1, n), w2 = mirror(i2 - 1, n);
            const std::size_t c = static_cast<std::size_t>(i1) * n + i2;
            const double vc = src[c];
            const double vE = src[static_cast<std::size_t>(e1) * n + i2];
            const double vW = src[static_cast<std::size_t>(w1) * n + i2];
            const double vN = src[static_cast<std::size_t>(i1) * n + e2];
            const double vS = src[static_cast<std::size_t>(i1) * n + w2];
            const double vEN = src[static_cast<std::size_t>(e1) * n + e2];
            const double vES = src[static_cast<std::size_t>(e1) * n + w2];
            const double vWN = src[static_cast<std::size_t>(w1) * n + e2];
            const double vWS = src[static_cast<std::size_t>(w1) * n + w2];
            const double wx = (vE - vW) * inv_2h;
            const double wy = (vN - vS) * inv_2h;
            const double wxx = (vE - 2.0 * vc + vW) * inv_h2;
            const double wyy = (vN - 2.0 * vc + vS) * inv_h2;
            const double wxy = (vEN - vES - vWN + vWS) * (0.25 * inv_h2);
            const double gs = wx * wx + wy * wy;
            const double num = wx * wx * wxx + 2.0 * wx * wy * wxy + wy * wy * wyy;
            dst[c] = vc + dt * (wxx + wyy - num / (gs + s2));
        };
        // Interior fast path: no index mirroring, contiguous inner rows.
        for (int i1 = 1; i1 + 1 < n; ++i1) {
            const double* rowC = src + static_cast<std::size_t>(i1) * n;
            const double* rowE = rowC + n;
            const double* rowW = rowC - n;
            double* rowD = dst + static_cast<std::size_t>(i1) * n;
            for (int i2 = 1; i2 + 1 < n; ++i2) {
                const double vc = rowC[i2];
                const double wx = (rowE[i2] - rowW[i2]) * inv_2h;
                const double wy = (rowC[i2 + 1] - rowC[i2 - 1]) * inv_2h;
                const double wxx = (rowE[i2] - 2.0 * vc + rowW[i2]) * inv_h2;
                const double wyy = (rowC[i2 + 1] - 2.0 * vc + rowC[i2 - 1]) * inv_h2;
                const double wxy =
                    (rowE[i2 + 1] - rowE[i2 - 1] - rowW[i2 + 1] + rowW[i2 - 1]) * (0.25 * inv_h2);
                const double gs = wx * wx + wy * wy;
                const double num = wx * wx * wxx + 2.0 * wx * wy * wxy + wy * wy * wyy;
                rowD[i2] = vc + dt * (wxx + wyy - num / (gs + s2));
            }
        }
        for (int i1 = 0; i1 < n; ++i1) {
            update(i1, 0);
            update(i1, n - 1);
        }
        for (int i2 = 1; i2 + 1 < n; ++i2) {
            update(0, i2);
            update(n - 1, i2);
        }
    } else {
        const std::size_t sn = static_cast<std::size_t>(n);
        auto at = [&](int a, int b, int c3) {
            return src[(static_cast<std::size_t>(a) * sn + b) * sn + c3];
        };
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) {
                    const int p1 = mirror(i1 + 1, n), m1 = mirror(i1 - 1, n);
                    const int p2 = mirror(i2 + 1, n), m2 = mirror(i2 - 1, n);
                    const int p3 = mirror(i3 + 1, n), m3 = mirror(i3 - 1, n);
                    const double vc = at(i1, i2, i3);
                    const double d1 = (at(p1, i2, i3) - at(m1, i2, i3)) * inv_2h;
                    const double d2 = (at(i1, p2, i3) - at(i1, m2, i3)) * inv_2h;
                    const double d3 = (at(i1, i2, p3) - at(i1, i2, m3)) * inv_2h;
                    const double d11 = (at(p1, i2, i3) - 2.0 * vc + at(m1, i2, i3)) * inv_h2;
                    const double d22 = (at(i1, p2, i3) - 2.0 * vc + at(i1, m2, i3)) * inv_h2;
                    const double d33 = (at(i1, i2, p3) - 2.0 * vc + at(i1, i2, m3)) * inv_h2;
                    const double d12 = (at(p1, p2, i3) - at(p1, m2, i3) - at(m1, p2, i3) +
                                        at(m1, m2, i3)) *
                                       (0.25 * inv_h2);
                    const double d13 = (at(p1, i2, p3) - at(p1, i2, m3) - at(m1, i2, p3) +
                                        at(m1, i2, m3)) *
                                       (0.25 * inv_h2);
                    const double d23 = (at(i1, p2, p3) - at(i1, p2, m3) - at(i1, m2, p3) +
                                        at(i1, m2, m3)) *
                                       (0.25 * inv_h2);
                    const double gs = d1 * d1 + d2 * d2 + d3 * d3;
                    const double num = d1 * d1 * d11 + d2 * d2 * d22 + d3 * d3 * d33 +
                                       2.0 * (d1 * d2 * d12 + d1 * d3 * d13 + d2 * d3 * d23);
                    dst[(static_cast<std::size_t>(i1) * sn + i2) * sn + i3] =
                        vc + dt * (d11 + d22 + d33 - num / (gs + s2));
                }
    }

    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (!std::isfinite(out.values[i]))
            throw DivergenceError("mcf_step: non-finite update at node " + std::to_string(i));
    return out;
}

std::vector<ScalarField> mcf_evolve(const ScalarField& w0, double dt, double sigma, long n_steps,
                                    const std::vector<long>& snapshot_steps) {
    for (long s : snapshot_steps)
        if (s < 0 || s > n_steps)
            throw ConfigError("mcf_evolve: snapshot step out of range");
    std::vector<ScalarField> shots;
    shots.reserve(snapshot_steps.size());
    ScalarField w = w0;
    auto want = [&](long k) {
        return std::find(snapshot_steps.begin(), snapshot_steps.end(), k) != snapshot_steps.end();
    };
    if (want(0))
        shots.push_back(w);
    for (long k = 1; k <= n_steps; ++k) {
        try {
            w = mcf_step(w, dt, sigma);
        } catch (const DivergenceError& e) {
            throw DivergenceError(std::string(e.what()) + " (step " + std::to_string(k) + ")");
        }
        if (want(k))
            shots.push_back(w);
    }
    return shots;
}

namespace {

// Crossing parameter along an edge whose endpoint values have opposite
// classes (a > 0 vs b <= 0 or vice versa).
inline double crossing_t(double a, double b) { return a / (a - b); }

} // namespace

FrontPolyline extract_front(const ScalarField& w) {
    const GridSpec& g = w.grid;
    const int n = g.n;
    FrontPolyline f;
    f.dim = g.dim;
    const double* v = w.values.data();

    auto inside = [](double val) { return val > 0.0; };

    if (g.dim == 1) {
        for (int i = 0; i + 1 < n; ++i) {
            if (inside(v[i]) == inside(v[i + 1]))
                continue;
            const double t = crossing_t(v[i], v[i + 1]);
            f.points.push_back({g.coord(i) + t * g.h(), 0.0, 0.0});
        }
        return f;
    }

    if (g.dim == 2) {
        // Vertex index per grid edge so shared endpoints are emitted once.
        // Edge ids: axis-1 edge from (i1,i2) is 2*(i1*n+i2), axis-2 edge is +1.
        std::vector<int> edge_vertex(2 * static_cast<std::size_t>(n) * n, -1);
        auto val = [&](int a, int b) { return v[static_cast<std::size_t>(a) * n + b]; };
        auto vertex_on = [&](int i1, int i2, int axis) {
            const std::size_t id = 2 * (static_cast<std::size_t>(i1) * n + i2) + axis;
            if (edge_vertex[id] >= 0)
                return edge_vertex[id];
            const double a = val(i1, i2);
            const double b = axis == 0 ? val(i1 + 1, i2) : val(i1, i2 + 1);
            const double t = crossing_t(a, b);
            std::array<double, 3> pt{g.coord(i1), g.coord(i2), 0.0};
            pt[axis] += t * g.h();
            edge_vertex[id] = static_cast<int>(f.points.size());
            f.points.push_back(pt);
            return edge_vertex[id];
        };
        // Edge labels within a cell: 0 = bottom (axis-1 edge at i2),
        // 1 = right (axis-2 edge at i1+1), 2 = top, 3 = left.
        auto cell_vertex = [&](int i1, int i2, int edge) {
            switch (edge) {
            case 0: return vertex_on(i1, i2, 0);
            case 1: return vertex_on(i1 + 1, i2, 1);
            case 2: return vertex_on(i1, i2 + 1, 0);
            default: return vertex_on(i1, i2, 1);
            }
        };
        for (int i1 = 0; i1 + 1 < n; ++i1) {
            for (int i2 = 0; i2 + 1 < n; ++i2) {
                const double v00 = val(i1, i2), v10 = val(i1 + 1, i2);
                const double v11 = val(i1 + 1, i2 + 1), v01 = val(i1, i2 + 1);
                const int code = (inside(v00) ? 1 : 0) | (inside(v10) ? 2 : 0) |
                                 (inside(v11) ? 4 : 0) | (inside(v01) ? 8 : 0);
                if (code == 0 || code == 15)
                    continue;
                int e[4];
                int ne = 0;
                auto seg = [&](int ea, int eb) {
                    e[ne++] = ea;
                    e[ne++] = eb;
                };
                switch (code) {
                case 1: seg(0, 3); break;
                case 2: seg(0, 1); break;
                case 3: seg(3, 1); break;
                case 4: seg(1, 2); break;
                case 6: seg(0, 2); break;
                case 7: seg(2, 3); break;
                case 8: seg(2, 3); break;
                case 9: seg(0, 2); break;
                case 11: seg(1, 2); break;
                case 12: seg(3, 1); break;
                case 13: seg(0, 1); break;
                case 14: seg(0, 3); break;
                case 5: // SW and NE inside; split by the cell-center average
                    if (v00 + v10 + v11 + v01 > 0.0) {
                        seg(0, 1);
                        seg(2, 3);
                    } else {
                        seg(0, 3);
                        seg(1, 2);
                    }
                    break;
                case 10: // SE and NW inside
                    if (v00 + v10 + v11 + v01 > 0.0) {
                        seg(0, 3);
                        seg(1, 2);
                    } else {
                        seg(0, 1);
                        seg(2, 3);
                    }
                    break;
                default: break;
                }
                for (int s = 0; s + 1 < ne; s += 2)
                    f.segments.emplace_back(cell_vertex(i1, i2, e[s]), cell_vertex(i1, i2, e[s + 1]));
            }
        }
        return f;
    }

    // dim == 3: point cloud of edge crossings along the three axis directions.
    const std::size_t sn = static_cast<std::size_t>(n);
    auto val3 = [&](int a, int b, int c) { return v[(static_cast<std::size_t>(a) * sn + b) * sn + c]; };
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i3 = 0; i3 < n; ++i3) {
                const double a = val3(i1, i2, i3);
                if (i1 + 1 < n && inside(a) != inside(val3(i1 + 1, i2, i3))) {
                    const double t = crossing_t(a, val3(i1 + 1, i2, i3));
                    f.points.push_back({g.coord(i1) + t * g.h(), g.coord(i2), g.coord(i3)});
                }
                if (i2 + 1 < n && inside(a) != inside(val3(i1, i2 + 1, i3))) {
                    const double t = crossing_t(a, val3(i1, i2 + 1, i3));
                    f.points.push_back({g.coord(i1), g.coord(i2) + t * g.h(), g.coord(i3)});
                }
                if (i3 + 1 < n && inside(a) != inside(val3(i1, i2, i3 + 1))) {
                    const double t = crossing_t(a, val3(i1, i2, i3 + 1));
                    f.points.push_back({g.coord(i1), g.coord(i2), g.coord(i3) + t * g.h()});
                }
            }
    return f;
}

double max_front_residual(const ScalarField& w, const FrontPolyline& front) {
    const GridSpec& g = w.grid;
    const int n = g.n;
    const double h = g.h();
    const double* v = w.values.data();
    double worst = 0.0;
    for (const auto& p : front.points) {
        // Multilinear interpolation at the point.
        int idx[3] = {0, 0, 0};
        double fr[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) {
            double rel = (p[a] + g.half_width) / h;
            int i = static_cast<int>(std::floor(rel));
            i = std::clamp(i, 0, n - 2);
            idx[a] = i;
            fr[a] = rel - i;
        }
        double acc = 0.0;
        const int corners = 1 << g.dim;
        for (int cbits = 0; cbits < corners; ++cbits) {
            double wgt = 1.0;
            std::size_t lin = 0;
            for (int a = 0; a < g.dim; ++a) {
                const int off = (cbits >> a) & 1;
                wgt *= off ? fr[a] : 1.0 - fr[a];
                lin = lin * n + (idx[a] + off);
            }
            acc += wgt * v[lin];
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

namespace {

double point_segment_dist2(double px, double py, const std::array<double, 3>& a,
                           const std::array<double, 3>& b) {
    const double abx = b[0] - a[0], aby = b[1] - a[1];
    const double apx = px - a[0], apy = py - a[1];
    const double len2 = abx * abx + aby * aby;
    double t = len2 > 0.0 ? (apx * abx + apy * aby) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = apx - t * abx, dy = apy - t * aby;
    return dx * dx + dy * dy;
}

double dist_to_front(const FrontPolyline& f, double x1, double x2, double x3) {
    double best = std::numeric_limits<double>::infinity();
    if (f.dim == 2 && !f.segments.empty()) {
        for (const auto& s : f.segments)
            best = std::min(best, point_segment_dist2(x1, x2, f.points[s.first], f.points[s.second]));
        return std::sqrt(best);
    }
    for (const auto& p : f.points) {
        const double dx = x1 - p[0], dy = x2 - p[1], dz = x3 - p[2];
        best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    return std::sqrt(best);
}

} // namespace

ScalarField signed_distance(const FrontPolyline& front, const ScalarField& w) {
    if (front.empty())
        throw ExtinctFrontError("signed_distance: empty front");
    if (front.dim != w.grid.dim)
        throw GridMismatchError("signed_distance: front and field dimensions differ");
    const GridSpec& g = w.grid;
    const int n = g.n;
    ScalarField d(g, 0.0, w.time);
    std::size_t idx = 0;
    if (g.dim == 1) {
        for (int i1 = 0; i1 < n; ++i1, ++idx) {
            const double dist = dist_to_front(front, g.coord(i1), 0.0, 0.0);
            d.values[idx] = w.values[idx] == 0.0 ? 0.0 : std::copysign(dist, w.values[idx]);
        }
    } else if (g.dim == 2) {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2, ++idx) {
                const double dist = dist_to_front(front, g.coord(i1), g.coord(i2), 0.0);
                d.values[idx] = w.values[idx] == 0.0 ? 0.0 : std::copysign(dist, w.values[idx]);
            }
    } else {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3, ++idx) {
                    const double dist = dist_to_front(front, g.coord(i1), g.coord(i2), g.coord(i3));
                    d.values[idx] = w.values[idx] == 0.0 ? 0.0 : std::copysign(dist, w.values[idx]);
                }
    }
    return d;
}

double analytic_sphere(double R0, int dim, double t) {
    if (!(R0 > 0.0) || dim < 1)
        throw ConfigError("analytic_sphere: R0 must be positive and dim >= 1");
    if (dim == 1)
        return R0;
    const double t_star = R0 * R0 / (2.0 * (dim - 1));
    if (t > t_star * (1.0 + 1e-12))
        throw ExtinctFrontError("analytic_sphere: t = " + std::to_string(t) +
                                " is past extinction t* = " + std::to_string(t_star));
    return std::sqrt(std::max(R0 * R0 - 2.0 * (dim - 1) * t, 0.0));
}

double mean_front_radius(const FrontPolyline& front) {
    if (front.empty())
        throw ExtinctFrontError("mean_front_radius: empty front");
    double sum = 0.0;
    for (const auto& p : front.points)
        sum += std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return sum / static_cast<double>(front.points.size());
}

double hausdorff_distance(const FrontPolyline& a, const FrontPolyline& b) {
    if (a.empty() || b.empty())
        throw ExtinctFrontError("hausdorff_distance: empty front");
    auto one_sided = [](const FrontPolyline& from, const FrontPolyline& to) {
        double worst = 0.0;
        for (const auto& p : from.points)
            worst = std::max(worst, dist_to_front(to, p[0], p[1], p[2]));
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

} // namespace spinlab
