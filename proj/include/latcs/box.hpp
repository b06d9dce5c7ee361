#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "latcs/point.hpp"

namespace latcs {

/// Axis-aligned box Omega = [lo_1,hi_1] x ... x [lo_n,hi_n] of Z^n together
/// with its lattice boundary dOmega (the points outside that have a nearest
/// neighbour inside).
///
/// Interior points are indexed lexicographically (first coordinate slowest),
/// boundary points likewise among themselves. "Closure" indices run over the
/// interior block first, then the boundary block, which is also the storage
/// layout of LatticeFunction.
class LatticeBox {
public:
    LatticeBox(const Point& lo, const Point& hi) : lo_(lo), hi_(hi) {
        Point::require_same_dim(lo, hi);
        if (lo.dim() < 2) throw DomainError("box dimension must be at least 2");
        for (int i = 0; i < dim(); ++i)
            if (lo[i] > hi[i]) throw DomainError("box corner ordering violated");
        interior_count_ = 1;
        for (int i = dim() - 1; i >= 0; --i) {
            stride_[i] = interior_count_;
            interior_count_ *= width(i);
        }
        build_boundary();
    }

    /// Cube of side 2*radius+1 around center (origin if omitted).
    static LatticeBox centered(int dim, int radius, const Point& center) {
        if (radius < 1) throw DomainError("box radius must be positive");
        if (center.dim() != dim) throw DomainError("center dimension mismatch");
        Point lo = center, hi = center;
        for (int i = 0; i < dim; ++i) {
            lo[i] -= radius;
            hi[i] += radius;
        }
        return LatticeBox(lo, hi);
    }

    static LatticeBox centered(int dim, int radius) {
        return centered(dim, radius, Point::zero(dim));
    }

    int dim() const noexcept { return lo_.dim(); }
    const Point& lo() const noexcept { return lo_; }
    const Point& hi() const noexcept { return hi_; }
    std::int64_t width(int axis) const noexcept { return hi_[axis] - lo_[axis] + 1; }

    std::int64_t interior_size() const noexcept { return interior_count_; }
    std::int64_t boundary_size() const noexcept { return static_cast<std::int64_t>(boundary_.size()); }
    std::int64_t closure_size() const noexcept { return interior_count_ + boundary_size(); }

    bool contains(const Point& p) const noexcept {
        if (p.dim() != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
        return true;
    }

    /// True when p lies on exactly one face extension, i.e. p is in dOmega.
    bool on_boundary(const Point& p) const noexcept {
        if (p.dim() != dim()) return false;
        int off = -1;
        for (int i = 0; i < dim(); ++i) {
            if (p[i] >= lo_[i] && p[i] <= hi_[i]) continue;
            if (p[i] != lo_[i] - 1 && p[i] != hi_[i] + 1) return false;
            if (off >= 0) return false; // sticks out along two axes: a diagonal, not adjacent
            off = i;
        }
        return off >= 0;
    }

    bool contains_closure(const Point& p) const noexcept { return contains(p) || on_boundary(p); }

    std::int64_t interior_index(const Point& p) const {
        if (!contains(p)) throw DomainError("point outside box interior: " + p.to_string());
        std::int64_t idx = 0;
        for (int i = 0; i < dim(); ++i) idx += (p[i] - lo_[i]) * stride_[i];
        return idx;
    }

    Point interior_point(std::int64_t idx) const {
        if (idx < 0 || idx >= interior_count_) throw DomainError("interior index out of range");
        Point p = lo_;
        for (int i = 0; i < dim(); ++i) {
            p[i] = static_cast<int>(lo_[i] + idx / stride_[i]);
            idx %= stride_[i];
        }
        return p;
    }

    std::int64_t boundary_index(const Point& p) const {
        auto it = boundary_lookup_.find(p);
        if (it == boundary_lookup_.end())
            throw DomainError("point not on box boundary: " + p.to_string());
        return it->second;
    }

    const Point& boundary_point(std::int64_t idx) const { return boundary_.at(static_cast<std::size_t>(idx)); }

    /// All boundary points in lexicographic order.
    const std::vector<Point>& boundary() const noexcept { return boundary_; }

    std::int64_t closure_index(const Point& p) const {
        if (contains(p)) return interior_index(p);
        return interior_count_ + boundary_index(p);
    }

    Point closure_point(std::int64_t idx) const {
        if (idx < interior_count_) return interior_point(idx);
        return boundary_point(idx - interior_count_);
    }

    /// Strict inclusion of closures: closure(inner) inside the interior of *this.
    bool strictly_contains(const LatticeBox& inner) const noexcept {
        if (inner.dim() != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (inner.lo_[i] - 1 < lo_[i] || inner.hi_[i] + 1 > hi_[i]) return false;
        return true;
    }

    std::int64_t stride(int axis) const noexcept { return stride_[axis]; }

    friend bool operator==(const LatticeBox& a, const LatticeBox& b) noexcept {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    void build_boundary() {
        // One slab per face: coordinate `axis` pinned one step outside,
        // the others ranging over the box. Faces only; corners and edges
        // are not lattice-adjacent to the interior.
        for (int axis = 0; axis < dim(); ++axis) {
            for (int side = 0; side < 2; ++side) {
                Point p = lo_;
                p[axis] = side ? hi_[axis] + 1 : lo_[axis] - 1;
                for (;;) {
                    boundary_.push_back(p);
                    int i = dim() - 1;
                    for (; i >= 0; --i) {
                        if (i == axis) continue;
                        if (p[i] < hi_[i]) {
                            ++p[i];
                            break;
                        }
                        p[i] = lo_[i];
                    }
                    if (i < 0) break;
                }
            }
        }
        std::sort(boundary_.begin(), boundary_.end());
        boundary_lookup_.reserve(boundary_.size());
        for (std::size_t i = 0; i < boundary_.size(); ++i)
            boundary_lookup_.emplace(boundary_[i], static_cast<std::int64_t>(i));
    }

    Point lo_, hi_;
    std::array<std::int64_t, kMaxDim> stride_{};
    std::int64_t interior_count_ = 0;
    std::vector<Point> boundary_;
    std::unordered_map<Point, std::int64_t, PointHash> boundary_lookup_;
};

using BoxPtr = std::shared_ptr<const LatticeBox>;

inline BoxPtr make_box(const Point& lo, const Point& hi) {
    return std::make_shared<const LatticeBox>(lo, hi);
}

inline BoxPtr make_centered_box(int dim, int radius, const Point& center) {
    return std::make_shared<const LatticeBox>(LatticeBox::centered(dim, radius, center));
}

inline BoxPtr make_centered_box(int dim, int radius) {
    return make_centered_box(dim, radius, Point::zero(dim));
}

/// Lattice boundary of an arbitrary finite set: every point outside the set
/// with a nearest neighbour inside it. Lexicographically sorted.
inline std::vector<Point> boundary_of(std::span<const Point> interior) {
    if (interior.empty()) throw DomainError("empty domain");
    std::unordered_set<Point, PointHash> inside(interior.begin(), interior.end());
    std::unordered_set<Point, PointHash> bdry;
    for (const Point& p : interior) {
        for_each_neighbor(p, [&](const Point& q) {
            if (!inside.count(q)) bdry.insert(q);
        });
    }
    std::vector<Point> out(bdry.begin(), bdry.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// Whether the set is connected in the nearest-neighbour graph of Z^n.
inline bool is_connected(std::span<const Point> set) {
    if (set.empty()) return true;
    std::unordered_set<Point, PointHash> inside(set.begin(), set.end());
    std::vector<Point> stack{set.front()};
    std::unordered_set<Point, PointHash> seen{set.front()};
    while (!stack.empty()) {
        Point p = stack.back();
        stack.pop_back();
        for_each_neighbor(p, [&](const Point& q) {
            if (inside.count(q) && !seen.count(q)) {
                seen.insert(q);
                stack.push_back(q);
            }
        });
    }
    return seen.size() == inside.size();
}

/// An increasing chain of concentric boxes used to exhaust Z^n. Radii must be
/// strictly increasing so each closure sits inside the next interior.
class Exhaustion {
public:
    Exhaustion(int dim, const Point& center, std::vector<int> radii)
        : dim_(dim), center_(center), radii_(std::move(radii)) {
        if (radii_.empty()) throw DomainError("empty exhaustion");
        int prev = 0;
        for (int r : radii_) {
            if (r <= prev) throw DomainError("exhaustion radii must be strictly increasing");
            prev = r;
        }
    }

    int size() const noexcept { return static_cast<int>(radii_.size()); }
    int radius(int i) const { return radii_.at(static_cast<std::size_t>(i)); }
    const std::vector<int>& radii() const noexcept { return radii_; }
    const Point& center() const noexcept { return center_; }

    BoxPtr box(int i) const { return make_centered_box(dim_, radius(i), center_); }

private:
    int dim_;
    Point center_;
    std::vector<int> radii_;
};

} // namespace latcs
