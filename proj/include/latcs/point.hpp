#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "latcs/errors.hpp"

// Compile-time cap on the lattice dimension. Eight covers every experiment we
// run; raise it here if you need more.
#ifndef LATCS_MAX_DIM
#define LATCS_MAX_DIM 8
#endif

namespace latcs {

inline constexpr int kMaxDim = LATCS_MAX_DIM;

/// A point of the integer lattice Z^n. Value type, fixed small storage.
///
/// The dimension travels with the point; mixing points of different
/// dimensions in one operation is an error, not a silent broadcast.
class Point {
public:
    Point() = default;

    Point(std::initializer_list<int> coords) : dim_(static_cast<int>(coords.size())) {
        check_dim(dim_);
        int i = 0;
        for (int c : coords) {
            if (i == kMaxDim) break; // unreachable, keeps bounds checkers quiet
            c_[i++] = c;
        }
    }

    explicit Point(std::span<const int> coords) : dim_(static_cast<int>(coords.size())) {
        check_dim(dim_);
        for (int i = 0; i < dim_; ++i) c_[i] = coords[i];
    }

    /// The origin of Z^n.
    static Point zero(int dim) {
        check_dim(dim);
        Point p;
        p.dim_ = dim;
        return p;
    }

    /// The standard unit vector e_axis in Z^n.
    static Point unit(int dim, int axis) {
        Point p = zero(dim);
        if (axis < 0 || axis >= dim) throw DomainError("axis out of range");
        p.c_[axis] = 1;
        return p;
    }

    int dim() const noexcept { return dim_; }

    int operator[](int i) const noexcept { return c_[i]; }
    int& operator[](int i) noexcept { return c_[i]; }

    const int* begin() const noexcept { return c_.data(); }
    const int* end() const noexcept { return c_.data() + dim_; }

    friend bool operator==(const Point& a, const Point& b) noexcept {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }

    /// Lexicographic order; shorter dimension compares first, so mixed-dim
    /// containers still sort deterministically.
    friend bool operator<(const Point& a, const Point& b) noexcept {
        if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

    Point shifted(int axis, int delta) const {
        Point p = *this;
        p.c_[axis] += delta;
        return p;
    }

    friend Point operator+(const Point& a, const Point& b) {
        require_same_dim(a, b);
        Point p = a;
        for (int i = 0; i < a.dim_; ++i) p.c_[i] += b.c_[i];
        return p;
    }

    friend Point operator-(const Point& a, const Point& b) {
        require_same_dim(a, b);
        Point p = a;
        for (int i = 0; i < a.dim_; ++i) p.c_[i] -= b.c_[i];
        return p;
    }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < dim_; ++i) {
            if (i) s += ",";
            s += std::to_string(c_[i]);
        }
        return s + ")";
    }

    static void require_same_dim(const Point& a, const Point& b) {
        if (a.dim_ != b.dim_) throw DomainError("dimension mismatch");
    }

private:
    static void check_dim(int d) {
        if (d < 1 || d > kMaxDim)
            throw DomainError("dimension must be between 1 and " + std::to_string(kMaxDim));
    }

    int dim_ = 0;
    std::array<int, kMaxDim> c_{};
};

/// Graph distance on Z^n, i.e. the l1 metric.
inline std::int64_t l1_distance(const Point& a, const Point& b) {
    Point::require_same_dim(a, b);
    std::int64_t d = 0;
    for (int i = 0; i < a.dim(); ++i)
        d += std::abs(static_cast<std::int64_t>(a[i]) - b[i]);
    return d;
}

inline std::int64_t l1_norm(const Point& p) { return l1_distance(p, Point::zero(p.dim())); }

inline std::int64_t linf_norm(const Point& p) {
    std::int64_t m = 0;
    for (int i = 0; i < p.dim(); ++i) m = std::max(m, static_cast<std::int64_t>(std::abs(p[i])));
    return m;
}

/// The 2n nearest neighbours of p, ordered axis by axis (-e_i before +e_i).
inline std::vector<Point> neighbors(const Point& p) {
    std::vector<Point> out;
    out.reserve(2 * static_cast<std::size_t>(p.dim()));
    for (int i = 0; i < p.dim(); ++i) {
        out.push_back(p.shifted(i, -1));
        out.push_back(p.shifted(i, +1));
    }
    return out;
}

/// Applies f to each neighbour without allocating.
template <typename F>
inline void for_each_neighbor(const Point& p, F&& f) {
    for (int i = 0; i < p.dim(); ++i) {
        f(p.shifted(i, -1));
        f(p.shifted(i, +1));
    }
}

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::uint64_t>(p.dim()));
        for (int i = 0; i < p.dim(); ++i) mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[i])));
        return static_cast<std::size_t>(h);
    }
};

} // namespace latcs
