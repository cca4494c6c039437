// phase_space.hpp — Lobe topology of Q-function grids
//
// Connectivity is 4-neighbour. On spin grids the azimuth wraps around and every
// sample on a pole row is the same point of the sphere.

#pragma once

#include "cavrevive/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace cavrevive {

struct GridPoint {
    Eigen::Index i{0};
    Eigen::Index j{0};
};

struct Lobe {
    std::size_t size{0};
    double peak{0.0};
    GridPoint peak_at;
    double centroid0{0.0};  // field: Re beta, spin: polar
    double centroid1{0.0};  // field: Im beta, spin: azimuth
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

inline bool is_pole(double polar) { return std::abs(polar) < 1e-12 || std::abs(polar - kPi) < 1e-12; }

// Calls f(neighbour) for each grid neighbour of (i, j), including the identifications
// that make a spin grid a sphere.
template <class F>
void for_each_neighbour(const PhaseSpaceGrid& g, Eigen::Index i, Eigen::Index j, F&& f) {
    const Eigen::Index rows = g.values.rows();
    const Eigen::Index cols = g.values.cols();
    if (i > 0) f(GridPoint{i - 1, j});
    if (i + 1 < rows) f(GridPoint{i + 1, j});
    if (j > 0) f(GridPoint{i, j - 1});
    if (j + 1 < cols) f(GridPoint{i, j + 1});
    if (g.kind != PhaseSpaceGrid::Kind::spin) return;
    if (cols > 2) {
        if (j == 0) f(GridPoint{i, cols - 1});
        if (j == cols - 1) f(GridPoint{i, 0});
    }
    if (is_pole(g.axis0[static_cast<std::size_t>(i)])) {
        for (Eigen::Index k = 0; k < cols; ++k)
            if (k != j) f(GridPoint{i, k});
    }
}

inline std::size_t flat(const PhaseSpaceGrid& g, GridPoint p) {
    return static_cast<std::size_t>(p.i * g.values.cols() + p.j);
}

} // namespace detail

// Connected components of { values >= fraction * max }, largest peak first.
inline std::vector<Lobe> superlevel_lobes(const PhaseSpaceGrid& g, double fraction) {
    const Eigen::Index rows = g.values.rows();
    const Eigen::Index cols = g.values.cols();
    if (rows == 0 || cols == 0) return {};
    const double level = fraction * g.values.maxCoeff();
    detail::DisjointSets sets(static_cast<std::size_t>(rows * cols));
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (g.values(i, j) < level) continue;
            detail::for_each_neighbour(g, i, j, [&](GridPoint q) {
                if (g.values(q.i, q.j) >= level) sets.unite(detail::flat(g, {i, j}), detail::flat(g, q));
            });
        }

    struct Accum {
        Lobe lobe;
        double w{0.0}, s0{0.0}, s1{0.0}, x{0.0}, y{0.0}, z{0.0};
    };
    std::vector<std::ptrdiff_t> slot(static_cast<std::size_t>(rows * cols), -1);
    std::vector<Accum> acc;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double v = g.values(i, j);
            if (v < level) continue;
            const std::size_t root = sets.find(detail::flat(g, {i, j}));
            if (slot[root] < 0) {
                slot[root] = static_cast<std::ptrdiff_t>(acc.size());
                acc.push_back({});
            }
            Accum& a = acc[static_cast<std::size_t>(slot[root])];
            a.lobe.size++;
            if (v > a.lobe.peak) {
                a.lobe.peak = v;
                a.lobe.peak_at = {i, j};
            }
            const double u0 = g.axis0[static_cast<std::size_t>(i)];
            const double u1 = g.axis1[static_cast<std::size_t>(j)];
            a.w += v;
            a.s0 += v * u0;
            a.s1 += v * u1;
            a.x += v * std::sin(u0) * std::cos(u1);
            a.y += v * std::sin(u0) * std::sin(u1);
            a.z += v * std::cos(u0);
        }

    std::vector<Lobe> lobes;
    for (auto& a : acc) {
        if (g.kind == PhaseSpaceGrid::Kind::field) {
            a.lobe.centroid0 = a.s0 / a.w;
            a.lobe.centroid1 = a.s1 / a.w;
        } else {
            a.lobe.centroid0 = std::atan2(std::hypot(a.x, a.y), a.z);
            double az = std::atan2(a.y, a.x);
            if (az < 0.0) az += 2.0 * kPi;
            a.lobe.centroid1 = az;
        }
        lobes.push_back(a.lobe);
    }
    std::sort(lobes.begin(), lobes.end(), [](const Lobe& l, const Lobe& r) { return l.peak > r.peak; });
    return lobes;
}

inline std::size_t count_lobes(const PhaseSpaceGrid& g, double fraction = 0.5) {
    return superlevel_lobes(g, fraction).size();
}

// Highest level t such that a and b lie in one component of { values >= t }; the
// saddle height between two peaks.
inline double merge_level(const PhaseSpaceGrid& g, GridPoint a, GridPoint b) {
    const Eigen::Index rows = g.values.rows();
    const Eigen::Index cols = g.values.cols();
    const std::size_t n = static_cast<std::size_t>(rows * cols);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const double* v = g.values.data();
    // values is column-major; map flat row-major index to storage
    auto value_at = [&](std::size_t k) {
        const Eigen::Index i = static_cast<Eigen::Index>(k) / cols;
        const Eigen::Index j = static_cast<Eigen::Index>(k) % cols;
        return v[j * rows + i];
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return value_at(l) > value_at(r); });

    detail::DisjointSets sets(n);
    std::vector<char> active(n, 0);
    const std::size_t fa = detail::flat(g, a);
    const std::size_t fb = detail::flat(g, b);
    for (std::size_t k : order) {
        active[k] = 1;
        const GridPoint p{static_cast<Eigen::Index>(k) / cols, static_cast<Eigen::Index>(k) % cols};
        detail::for_each_neighbour(g, p.i, p.j, [&](GridPoint q) {
            const std::size_t fq = detail::flat(g, q);
            if (active[fq]) sets.unite(k, fq);
        });
        if (active[fa] && active[fb] && sets.find(fa) == sets.find(fb)) return value_at(k);
    }
    return 0.0;
}

// Grid points strictly larger than every neighbour (ties broken toward the lower
// flat index) with value >= min_fraction * max, largest first.
inline std::vector<GridPoint> local_maxima(const PhaseSpaceGrid& g, double min_fraction = 0.0) {
    std::vector<GridPoint> out;
    const double floor_value = min_fraction * g.values.maxCoeff();
    for (Eigen::Index i = 0; i < g.values.rows(); ++i)
        for (Eigen::Index j = 0; j < g.values.cols(); ++j) {
            const double v = g.values(i, j);
            if (v < floor_value) continue;
            bool peak = true;
            const std::size_t here = detail::flat(g, {i, j});
            detail::for_each_neighbour(g, i, j, [&](GridPoint q) {
                const double w = g.values(q.i, q.j);
                if (w > v || (w == v && detail::flat(g, q) < here)) peak = false;
            });
            if (peak) out.push_back({i, j});
        }
    std::sort(out.begin(), out.end(),
              [&](GridPoint l, GridPoint r) { return g.values(l.i, l.j) > g.values(r.i, r.j); });
    return out;
}

} // namespace cavrevive
