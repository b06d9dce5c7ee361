#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "latcs/box.hpp"
#include "latcs/errors.hpp"
#include "latcs/field.hpp"
#include "latcs/format.hpp"
#include "latcs/linear_solver.hpp"
#include "latcs/parallel.hpp"
#include "latcs/point.hpp"
#include "latcs/vortex.hpp"

namespace latcs {

/// One computed value of the lattice Green's function, with the method that
/// produced it and an error estimate for that method.
struct GreenValue {
    double value = 0.0;
    double err_est = 0.0;
    std::string method;
};

struct GreenParams {
    /// Requested accuracy. Zero accepts whatever the default budget delivers;
    /// a positive tolerance escalates the grid (or fails loudly) until the
    /// error estimate drops below it.
    double tol = 0.0;
    long long mc_samples = 2'000'000;
    std::uint64_t mc_seed = 0x6c617463735f67ULL;
    int workers = 1;
};

namespace detail {

/// Nodes and weights of the g-point Gauss-Legendre rule on [-1,1], by Newton
/// iteration on the Legendre recurrence.
inline void gauss_legendre(int g, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(g, 0.0);
    weights.assign(g, 0.0);
    for (int i = 0; i < (g + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (g + 0.5));
        double deriv = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= g; ++k) {
                double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            deriv = g * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / deriv;
            t -= dt;
            if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) break;
        }
        nodes[i] = -t;
        nodes[g - 1 - i] = t;
        weights[i] = weights[g - 1 - i] = 2.0 / ((1.0 - t * t) * deriv * deriv);
    }
}

/// int_{[0,1]^n} dz / |z|^2 for n >= 3. Splitting off the half cube gives the
/// self-similar identity C = E + 2^{2-n} C, where E is the integral over the
/// L-shaped shell [0,1]^n \ [0,1/2]^n. The shell splits into 2^n - 1 boxes on
/// which the integrand is smooth, each handled by a tensor Gauss-Legendre
/// rule, so no truncation tail is left over.
inline double unit_cube_inv_r2(int n) {
    static std::mutex cache_mutex;
    static std::array<double, kMaxDim + 1> cache{};
    std::lock_guard<std::mutex> lock(cache_mutex);
    double& slot = cache.at(static_cast<std::size_t>(n));
    if (slot != 0.0) return slot;

    const int g = n <= 4 ? 12 : (n == 5 ? 8 : 6);
    std::vector<double> gx, gw;
    gauss_legendre(g, gx, gw);
    // Per-axis nodes on [0,1/2] (slots 0..g-1) and [1/2,1] (slots g..2g-1).
    std::vector<double> node(2 * g), wt(2 * g);
    for (int i = 0; i < g; ++i) {
        node[i] = 0.25 * (gx[i] + 1.0);
        wt[i] = 0.25 * gw[i];
        node[g + i] = 0.5 + node[i];
        wt[g + i] = wt[i];
    }

    long double shell = 0.0L;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> idx(n, 0);
        long double cell = 0.0L;
        for (;;) {
            double r2 = 0.0, w = 1.0;
            for (int j = 0; j < n; ++j) {
                const int slot_j = ((mask >> j) & 1u) ? g + idx[j] : idx[j];
                r2 += node[slot_j] * node[slot_j];
                w *= wt[slot_j];
            }
            cell += w / r2;
            int j = n - 1;
            while (j >= 0 && ++idx[j] == g) idx[j--] = 0;
            if (j < 0) break;
        }
        shell += cell;
    }
    slot = static_cast<double>(shell / (1.0L - std::pow(2.0L, 2 - n)));
    return slot;
}

/// Midpoint-rule sum of the even part of the Green integrand over the
/// positive orthant [0,pi]^n with N points per axis. The integrand
/// cos(z.x)/(2n - 2 sum cos z_j) keeps its 1/|z|^2 blow-up at the origin, so
/// that term is subtracted on the axis cube [0,a]^n (a = pi/4, always a whole
/// number of cells) and its integral a^{n-2} C_n is restored in closed form.
inline double orthant_pass(int n, const Point& x, int N) {
    const double h = std::numbers::pi / N;
    const int m = N / 4;
    std::vector<double> cosz(N), z2(N);
    std::vector<std::vector<double>> ct(n, std::vector<double>(N));
    for (int k = 0; k < N; ++k) {
        const double z = (k + 0.5) * h;
        cosz[k] = std::cos(z);
        z2[k] = z * z;
        for (int j = 0; j < n; ++j) ct[static_cast<std::size_t>(j)][k] = std::cos(z * x[j]);
    }

    const double* last_cos = ct[static_cast<std::size_t>(n - 1)].data();
    std::vector<int> idx(n - 1, 0);
    long double total = 0.0L;
    for (;;) {
        double cos_sum = 0.0, prod = 1.0, r2_prefix = 0.0;
        bool in_cube = true;
        for (int j = 0; j + 1 < n; ++j) {
            const int i = idx[static_cast<std::size_t>(j)];
            cos_sum += cosz[i];
            prod *= ct[static_cast<std::size_t>(j)][i];
            r2_prefix += z2[i];
            in_cube = in_cube && i < m;
        }
        const double base = 2.0 * n - 2.0 * cos_sum;
        double row = 0.0;
        for (int k = 0; k < N; ++k) row += prod * last_cos[k] / (base - 2.0 * cosz[k]);
        if (in_cube)
            for (int k = 0; k < m; ++k) row -= 1.0 / (r2_prefix + z2[k]);
        total += row;

        int j = n - 2;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == N) idx[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
    }

    const double a = m * h;
    return static_cast<double>(total) * std::pow(h, n) +
           std::pow(a, n - 2) * unit_cube_inv_r2(n);
}

/// Midpoint sum of the odd part sin(z.x)/(2n - 2 sum cos z_j) over the full
/// cube [-pi,pi]^n on a small symmetric grid. The node set is closed under
/// z -> -z, so this cancels in exact arithmetic; what is returned is the
/// roundoff-level leftover, audited against the tolerance by the caller.
inline double imaginary_part_probe(int n, const Point& x, int N) {
    const double h = 2.0 * std::numbers::pi / N;
    std::vector<double> z(N), cosz(N);
    for (int k = 0; k < N; ++k) {
        z[k] = -std::numbers::pi + (k + 0.5) * h;
        cosz[k] = std::cos(z[k]);
    }
    std::vector<int> idx(n, 0);
    long double total = 0.0L;
    for (;;) {
        double dot = 0.0, cos_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const int i = idx[static_cast<std::size_t>(j)];
            dot += z[i] * x[j];
            cos_sum += cosz[i];
        }
        total += std::sin(dot) / (2.0 * n - 2.0 * cos_sum);
        int j = n - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == N) idx[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
    }
    return std::abs(static_cast<double>(total)) * std::pow(h / (2.0 * std::numbers::pi), n);
}

/// Coarse-grid ladder per dimension. Each level is evaluated as the pair
/// (N, 2N) and Richardson-extrapolated; the budgets keep the fine grid at or
/// under ~10^9 points.
inline std::vector<int> quadrature_ladder(int n) {
    switch (n) {
        case 3: return {64, 128, 256};
        case 4: return {48, 96};
        case 5: return {24, 32};
        default: return {12, 16};
    }
}

inline GreenValue green_quadrature(int n, const Point& x, const GreenParams& params) {
    const double pi_n = std::pow(std::numbers::pi, n);
    GreenValue out;
    out.method = "quadrature";
    for (const int N : quadrature_ladder(n)) {
        const double coarse = orthant_pass(n, x, N);
        const double fine = orthant_pass(n, x, 2 * N);
        // The midpoint rule converges at O(h^2); eliminate that term.
        out.value = -((4.0 * fine - coarse) / 3.0) / pi_n;
        out.err_est = std::abs(fine - coarse) / (3.0 * pi_n) + 8.0 * 1e-16 * std::abs(out.value);
        if (params.tol <= 0.0 || out.err_est <= params.tol) break;
    }
    if (params.tol > 0.0 && out.err_est > params.tol)
        throw SolverError("Green's function quadrature cannot reach the requested tolerance",
                          out.err_est);
    if (l1_norm(x) > 0) {
        const double im = imaginary_part_probe(n, x, 8);
        const double im_cap = std::max(params.tol, 1e-9);
        if (im > im_cap)
            throw SolverError("Green's function quadrature produced a non-real value", im);
    }
    return out;
}

/// FNV-1a over the evaluation site, mixed into the base seed so distinct
/// table entries draw from independent, reproducible streams.
inline std::uint64_t mc_stream_seed(std::uint64_t base, int n, const Point& x) {
    std::uint64_t h = 14695981039346656037ULL ^ base;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(n));
    for (int j = 0; j < n; ++j) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(x[j])));
    return h;
}

inline GreenValue green_monte_carlo(int n, const Point& x, const GreenParams& params) {
    if (params.mc_samples < 2) throw DomainError("sample budget must be at least 2");
    std::mt19937_64 rng(mc_stream_seed(params.mc_seed, n, x));
    // G_n(x) = -E[prod_j cos(z_j x_j) / (2n - 2 sum cos z_j)], z uniform on [0,pi]^n.
    const long long M = params.mc_samples;
    long double sum = 0.0L, sum_sq = 0.0L;
    std::array<double, kMaxDim> xr{};
    for (int j = 0; j < n; ++j) xr[static_cast<std::size_t>(j)] = x[j];
    for (long long s = 0; s < M; ++s) {
        double cos_sum = 0.0, prod = 1.0;
        for (int j = 0; j < n; ++j) {
            const double z = std::numbers::pi * std::ldexp(static_cast<double>(rng() >> 11), -53);
            cos_sum += std::cos(z);
            if (xr[static_cast<std::size_t>(j)] != 0.0) prod *= std::cos(z * xr[static_cast<std::size_t>(j)]);
        }
        const double v = prod / (2.0 * n - 2.0 * cos_sum);
        sum += v;
        sum_sq += static_cast<long double>(v) * v;
    }
    const double mean = static_cast<double>(sum / M);
    const double var = std::max(0.0, static_cast<double>((sum_sq - sum * sum / M) / (M - 1)));
    GreenValue out;
    out.value = -mean;
    out.err_est = 3.0 * std::sqrt(var / static_cast<double>(M));
    out.method = "monte-carlo";
    if (params.tol > 0.0 && out.err_est > params.tol)
        throw SolverError("Green's function sampling cannot reach the requested tolerance",
                          out.err_est);
    if (l1_norm(x) > 0) {
        const double im = imaginary_part_probe(n, x, 6);
        const double im_cap = std::max(params.tol, 1e-9);
        if (im > im_cap)
            throw SolverError("Green's function quadrature produced a non-real value", im);
    }
    return out;
}

inline void require_green_dimension(int n, const Point& x) {
    if (n <= 2) throw DomainError("Green's function with zero limit exists only for n ≥ 3");
    if (n != x.dim()) throw DomainError("dimension mismatch");
}

/// Canonical key of the hyperoctahedral symmetry class: |coords| sorted
/// descending. The integral depends on x only through this multiset.
inline std::vector<int> symmetry_class(const Point& x) {
    std::vector<int> key(static_cast<std::size_t>(x.dim()));
    for (int j = 0; j < x.dim(); ++j) key[static_cast<std::size_t>(j)] = std::abs(x[j]);
    std::sort(key.begin(), key.end(), std::greater<int>());
    return key;
}

/// Default-budget quadrature values are deterministic per symmetry class, so
/// they are memoized process-wide; kernel superpositions on large boxes hit
/// the same classes over and over. Explicit tolerances bypass the cache.
inline GreenValue cached_green_quadrature(int n, const Point& x, const GreenParams& params) {
    if (params.tol > 0.0) return green_quadrature(n, x, params);
    static std::mutex cache_mutex;
    static std::map<std::pair<int, std::vector<int>>, GreenValue> cache;
    const auto key = std::make_pair(n, symmetry_class(x));
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    GreenValue gv = green_quadrature(n, Point(std::span<const int>(key.second)), params);
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(std::move(key), gv);
    return gv;
}

} // namespace detail

/// Value of the lattice Green's function G_n at x, the kernel with Delta G =
/// delta_0 on Z^n and G -> 0 at infinity. Tensor-grid quadrature up to n = 6,
/// seeded Monte Carlo beyond. Exists only for n >= 3.
inline GreenValue green_value(int n, const Point& x, const GreenParams& params = {}) {
    detail::require_green_dimension(n, x);
    return n <= 6 ? detail::cached_green_quadrature(n, x, params)
                  : detail::green_monte_carlo(n, x, params);
}

inline GreenValue green_value(int n, const Point& x, double tol) {
    GreenParams params;
    params.tol = tol;
    return green_value(n, x, params);
}

/// Independent estimate of G_n(x) from Dirichlet Poisson solves: solve
/// Delta w = delta_0 with zero boundary data on centered boxes of increasing
/// radius, then remove the leading finite-size corrections by fitting
/// w_R(x) = G + a R^{2-n} + b R^{1-n} through the last three radii. The error
/// estimate is the shift incurred by dropping the R^{1-n} term.
inline GreenValue green_value_box_estimate(int n, const Point& x,
                                           std::span<const int> radii = {}) {
    detail::require_green_dimension(n, x);
    std::vector<int> rs(radii.begin(), radii.end());
    if (rs.empty()) rs = n == 3 ? std::vector<int>{8, 12, 16} : std::vector<int>{6, 8, 10};
    if (rs.size() < 3) throw DomainError("box extrapolation needs at least three radii");
    for (std::size_t i = 0; i + 1 < rs.size(); ++i)
        if (rs[i] >= rs[i + 1]) throw DomainError("radii must be strictly increasing");
    if (linf_norm(x) >= rs.front()) throw DomainError("point outside the smallest box");

    std::vector<double> at_x(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        BoxPtr box = make_centered_box(n, rs[i]);
        std::vector<double> f(static_cast<std::size_t>(box->interior_size()), 0.0);
        f[static_cast<std::size_t>(box->interior_index(Point::zero(n)))] = 1.0;
        SolverParams cg;
        cg.tol = 1e-12;
        std::vector<double> w = solve_dirichlet_interior(*box, {}, f, {}, cg);
        at_x[i] = w[static_cast<std::size_t>(box->interior_index(x))];
    }

    // Three-point Cramer solve for [G, a, b] against the last three radii.
    const std::size_t k = rs.size();
    long double A[3][3], rhs[3];
    for (int r = 0; r < 3; ++r) {
        const long double R = rs[k - 3 + static_cast<std::size_t>(r)];
        A[r][0] = 1.0L;
        A[r][1] = std::pow(R, static_cast<long double>(2 - n));
        A[r][2] = std::pow(R, static_cast<long double>(1 - n));
        rhs[r] = at_x[k - 3 + static_cast<std::size_t>(r)];
    }
    auto det3 = [](const long double M[3][3]) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    const long double det = det3(A);
    long double G3[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) G3[r][c] = c == 0 ? rhs[r] : A[r][c];
    const double fit3 = static_cast<double>(det3(G3) / det);

    // Two-term fit through the last two radii, as the error probe.
    const long double p1 = std::pow(static_cast<long double>(rs[k - 2]), static_cast<long double>(2 - n));
    const long double p2 = std::pow(static_cast<long double>(rs[k - 1]), static_cast<long double>(2 - n));
    const double fit2 =
        static_cast<double>((at_x[k - 1] * p1 - at_x[k - 2] * p2) / (p1 - p2));

    GreenValue out;
    out.value = fit3;
    out.err_est = std::abs(fit3 - fit2) + 1e-9;
    out.method = "box-fit";
    return out;
}

/// Tabulated G_n over the l1 ball of a given radius, stored one entry per
/// hyperoctahedral symmetry class.
class GreenTable {
public:
    struct Entry {
        double value;
        double err_est;
        std::string method;
    };

    GreenTable(int dim, int l1_radius, const GreenParams& params = {})
        : dim_(dim), radius_(l1_radius) {
        detail::require_green_dimension(dim, Point::zero(dim));
        if (l1_radius < 1) throw DomainError("table radius must be positive");

        std::vector<std::vector<int>> keys;
        std::vector<int> partial(static_cast<std::size_t>(dim), 0);
        enumerate_classes(partial, 0, l1_radius, l1_radius, keys);
        std::vector<Entry> computed(keys.size());
        parallel_for(static_cast<std::int64_t>(keys.size()), params.workers,
                     [&](std::int64_t i) {
                         const std::vector<int>& key = keys[static_cast<std::size_t>(i)];
                         GreenValue gv = green_value(
                             dim_, Point(std::span<const int>(key)), params);
                         computed[static_cast<std::size_t>(i)] =
                             Entry{gv.value, gv.err_est, gv.method};
                     });
        for (std::size_t i = 0; i < keys.size(); ++i)
            classes_.emplace(std::move(keys[i]), std::move(computed[i]));
    }

    int dim() const noexcept { return dim_; }
    int radius() const noexcept { return radius_; }
    const std::map<std::vector<int>, Entry>& classes() const noexcept { return classes_; }

    const Entry& at(const Point& x) const {
        if (x.dim() != dim_) throw DomainError("dimension mismatch");
        auto it = classes_.find(detail::symmetry_class(x));
        if (it == classes_.end())
            throw DomainError("point outside tabulated radius: " + x.to_string());
        return it->second;
    }

    double value(const Point& x) const { return at(x).value; }

    /// |Delta G(x) - delta_0(x)| from table lookups; the defining equation of
    /// the kernel, checkable wherever all neighbors are tabulated.
    double stencil_defect(const Point& x) const {
        if (l1_norm(x) + 1 > radius_) throw DomainError("stencil outside domain");
        double acc = -2.0 * dim_ * value(x);
        for_each_neighbor(x, [&](const Point& y) { acc += value(y); });
        if (l1_norm(x) == 0) acc -= 1.0;
        return std::abs(acc);
    }

    /// Largest tabulated value; the kernel is nonpositive, so this should not
    /// exceed roundoff plus the per-entry error estimate.
    double max_value() const {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& [key, e] : classes_) m = std::max(m, e.value);
        return m;
    }

    bool origin_is_minimum() const {
        const double g0 = value(Point::zero(dim_));
        for (const auto& [key, e] : classes_)
            if (e.value < g0) return false;
        return true;
    }

    /// CSV rows, one per symmetry class: n, x (semicolon-separated canonical
    /// coordinates), value, err_est.
    void write_csv(std::ostream& os) const {
        os << "n,x,value,err_est\n";
        for (const auto& [key, e] : classes_) {
            os << dim_ << ',';
            for (std::size_t j = 0; j < key.size(); ++j)
                os << (j ? ";" : "") << key[j];
            os << ',' << g17(e.value) << ',' << g17(e.err_est) << '\n';
        }
    }

private:
    static void enumerate_classes(std::vector<int>& partial, int pos, int left, int cap,
                                  std::vector<std::vector<int>>& out) {
        if (pos == static_cast<int>(partial.size())) {
            out.push_back(partial);
            return;
        }
        for (int c = std::min(cap, left); c >= 0; --c) {
            partial[static_cast<std::size_t>(pos)] = c;
            enumerate_classes(partial, pos + 1, left - c, c, out);
        }
    }

    int dim_;
    int radius_;
    std::map<std::vector<int>, Entry> classes_;
};

/// Superposition of kernel translates matching one side's sources: for the
/// u side this is 4 pi sum_j m_j G_n(x - p_j), the function with Laplacian
/// equal to that side's source field and zero limit at infinity. Tabulated on
/// the closure of `window`.
inline LatticeFunction green_combination(const VortexConfig& cfg, Side side,
                                         const BoxPtr& window, const GreenParams& params = {}) {
    const int n = window->dim();
    detail::require_green_dimension(n, Point::zero(n));
    if (cfg.dim() != n) throw DomainError("config dimension mismatch");

    LatticeFunction out(window);
    const std::vector<Vortex>& sources = cfg.vortices(side);
    if (sources.empty()) return out;

    std::map<std::vector<int>, double> cache;
    std::vector<std::vector<int>> keys;
    const std::int64_t closure = window->closure_size();
    for (std::int64_t i = 0; i < closure; ++i) {
        const Point p = window->closure_point(i);
        for (const Vortex& w : sources) {
            std::vector<int> key = detail::symmetry_class(p - w.site);
            if (cache.emplace(key, 0.0).second) keys.push_back(std::move(key));
        }
    }
    std::vector<double> values(keys.size());
    parallel_for(static_cast<std::int64_t>(keys.size()), params.workers, [&](std::int64_t i) {
        const std::vector<int>& key = keys[static_cast<std::size_t>(i)];
        values[static_cast<std::size_t>(i)] =
            green_value(n, Point(std::span<const int>(key)), params).value;
    });
    for (std::size_t i = 0; i < keys.size(); ++i) cache[keys[i]] = values[i];

    for (std::int64_t i = 0; i < closure; ++i) {
        const Point p = window->closure_point(i);
        double acc = 0.0;
        for (const Vortex& w : sources)
            acc += kFourPi * w.mass * cache.at(detail::symmetry_class(p - w.site));
        out[i] = acc;
    }
    return out;
}

/// The explicit dimension-decay bound on |G_n(0)|: the two-term majorant
/// l^{n-2} / ((n-2) 2^{n+1} pi^{n/2-2} Gamma(n/2)) + pi^2 / (4 l^2),
/// minimized in closed form over the free cut radius l > 0.
inline double green_dimension_bound(int n) {
    if (n <= 2) throw DomainError("Green's function with zero limit exists only for n ≥ 3");
    const double alpha = 1.0 / ((n - 2) * std::pow(2.0, n + 1) *
                                std::pow(std::numbers::pi, 0.5 * n - 2.0) * std::tgamma(0.5 * n));
    const double pi_sq = std::numbers::pi * std::numbers::pi;
    const double l_star = std::pow(pi_sq / (2.0 * (n - 2) * alpha), 1.0 / n);
    return alpha * std::pow(l_star, n - 2) + pi_sq / (4.0 * l_star * l_star);
}

struct GreenSupNormEntry {
    int dim;
    double sup_norm;
    double err_est;
    std::string method;
    /// Dimension-decay majorant and the one-vertex Dirichlet floor 1/(2n);
    /// the sup norm must sit between them.
    double bound;
    double lower_floor;
};

/// ||G_n||_inf = |G_n(0)| across dimensions. The values should decrease
/// strictly in n and sit inside [1/(2n), bound(n)]; callers assert that.
inline std::vector<GreenSupNormEntry> green_sup_norm_sweep(std::span<const int> dims,
                                                           const GreenParams& params = {}) {
    std::vector<GreenSupNormEntry> out;
    out.reserve(dims.size());
    for (const int n : dims) {
        GreenValue gv = green_value(n, Point::zero(std::max(n, 1)), params);
        out.push_back(GreenSupNormEntry{n, std::abs(gv.value), gv.err_est, gv.method,
                                        green_dimension_bound(n), 1.0 / (2.0 * n)});
    }
    return out;
}

} // namespace latcs
