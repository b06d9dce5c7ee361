#pragma once

#include <cstdint>
#include <span>

#include "latcs/field.hpp"

namespace latcs {

/// Graph Laplacian at an interior point: sum of neighbour values minus 2n
/// times the value. Needs the full stencil, hence x must be interior.
inline double laplacian(const LatticeFunction& f, const Point& x) {
    const LatticeBox& box = f.domain();
    if (!box.contains(x)) throw DomainError("stencil outside domain");
    double acc = 0.0;
    for_each_neighbor(x, [&](const Point& y) { acc += f(y); });
    return acc - 2.0 * box.dim() * f(x);
}

/// Outward normal difference at a boundary point: sum over interior
/// neighbours y of f(x) - f(y). For a box each boundary point has exactly
/// one interior neighbour.
inline double normal_derivative(const LatticeFunction& f, const Point& x) {
    const LatticeBox& box = f.domain();
    if (!box.on_boundary(x)) throw DomainError("normal derivative needs a boundary point");
    double acc = 0.0;
    for_each_neighbor(x, [&](const Point& y) {
        if (box.contains(y)) acc += f(x) - f(y);
    });
    return acc;
}

/// Dirichlet bilinear form: half the sum of difference products over interior
/// edges plus the full sum over interior-to-boundary edges.
inline double dirichlet_form(const LatticeFunction& f, const LatticeFunction& g) {
    if (!f.same_domain(g)) throw DomainError("dirichlet form needs a shared domain");
    const LatticeBox& box = f.domain();
    double acc = 0.0;
    for (std::int64_t i = 0; i < box.interior_size(); ++i) {
        Point x = box.interior_point(i);
        const double fx = f[i], gx = g[i];
        for_each_neighbor(x, [&](const Point& y) {
            const double w = box.contains(y) ? 0.5 : 1.0;
            acc += w * (f(y) - fx) * (g(y) - gx);
        });
    }
    return acc;
}

/// (Laplacian - L) f evaluated on the interior; boundary slots of the result
/// are zero. Boundary values of f do enter through the stencil.
LatticeFunction apply_shifted(const LatticeFunction& f, double L);

namespace stencil {

/// out = ((2n + L) I - Adjacency) w on the interior of `box`, with w extended
/// by zero outside. This is -(Laplacian - L) restricted to zero Dirichlet
/// data, the SPD operator the conjugate gradient solver works with.
///
/// The adjacency passes run one lattice axis at a time over contiguous
/// blocks, so everything stays in flat arrays with unit or fixed strides.
inline void neg_shifted_apply(const LatticeBox& box, double uniform_shift,
                              std::span<const double> variable_shift, std::span<const double> w,
                              std::span<double> out) {
    const std::int64_t N = box.interior_size();
    const double diag = uniform_shift + 2.0 * box.dim();
    if (variable_shift.empty()) {
        for (std::int64_t i = 0; i < N; ++i) out[i] = diag * w[i];
    } else {
        for (std::int64_t i = 0; i < N; ++i) out[i] = (diag + variable_shift[i]) * w[i];
    }
    for (int d = 0; d < box.dim(); ++d) {
        const std::int64_t s = box.stride(d);
        const std::int64_t block = box.width(d) * s;
        for (std::int64_t base = 0; base < N; base += block) {
            const double* wb = w.data() + base;
            double* ob = out.data() + base;
            for (std::int64_t i = s; i < block; ++i) ob[i] -= wb[i - s];
            for (std::int64_t i = 0; i < block - s; ++i) ob[i] -= wb[i + s];
        }
    }
}

/// out = Laplacian w on the interior, zero Dirichlet extension.
inline void laplacian_zero_bc(const LatticeBox& box, std::span<const double> w, std::span<double> out) {
    neg_shifted_apply(box, 0.0, {}, w, out);
    for (std::int64_t i = 0; i < box.interior_size(); ++i) out[i] = -out[i];
}

/// Adds to `out` the stencil contribution of explicit boundary data:
/// out[x] += sum of b over boundary neighbours of x. Box boundary points
/// have exactly one interior neighbour, found by stepping back inside.
inline void add_boundary_neighbors(const LatticeBox& box, std::span<const double> bvals,
                                   std::span<double> out) {
    const std::int64_t M = box.boundary_size();
    for (std::int64_t j = 0; j < M; ++j) {
        if (bvals[j] == 0.0) continue;
        Point y = box.boundary_point(j);
        for (int d = 0; d < box.dim(); ++d) {
            if (y[d] < box.lo()[d]) {
                out[box.interior_index(y.shifted(d, +1))] += bvals[j];
                break;
            }
            if (y[d] > box.hi()[d]) {
                out[box.interior_index(y.shifted(d, -1))] += bvals[j];
                break;
            }
        }
    }
}

} // namespace stencil

inline LatticeFunction apply_shifted(const LatticeFunction& f, double L) {
    const BoxPtr& box = f.domain_ptr();
    LatticeFunction out(box);
    const std::int64_t N = box->interior_size();
    std::span<double> oi = out.interior();
    stencil::neg_shifted_apply(*box, L, {}, f.interior(), oi);
    for (std::int64_t i = 0; i < N; ++i) oi[i] = -oi[i];
    stencil::add_boundary_neighbors(*box, f.boundary_values(), oi);
    return out;
}

} // namespace latcs
