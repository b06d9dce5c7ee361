#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "latcs/linear_solver.hpp"
#include "latcs/vortex.hpp"

namespace latcs {

/// Controls for the monotone iteration. The linearization shift must satisfy
/// L > 2*lambda strictly; 2.5*lambda is the house default.
struct SchemeParams {
    double lambda = 1.0;
    double shift_L = 2.5;
    double stop_tol = 1e-10;       // sup-norm change of (u, v) per sweep
    std::int64_t max_outer = 100000;
    SolverParams linear{1e-12, 0, "cg"};

    static SchemeParams for_lambda(double lambda) {
        SchemeParams p;
        p.lambda = lambda;
        p.shift_L = 2.5 * lambda;
        return p;
    }

    void validate() const {
        if (!(lambda > 0.0)) throw DomainError("coupling must be positive");
        if (!(shift_L > 2.0 * lambda)) throw DomainError("shift too small");
    }
};

/// Everything the solve certifies about itself. Tolerance checks live with
/// the caller; the report just carries honestly computed numbers.
struct SolveReport {
    std::int64_t outer_iters = 0;
    double final_diff = 0.0;              // last sup-norm change, u plus v
    bool monotone_ok = true;              // no sweep raised a value beyond 1e-12
    double max_monotone_violation = 0.0;  // largest positive increment seen
    double residual_u = 0.0;              // sup norm of the nonlinear residual
    double residual_v = 0.0;
    double flux_defect_u = 0.0;           // boundary flux + lambda-mass - source total
    double flux_defect_v = 0.0;
    double boundary_layer_sum_u = 0.0;    // sum of |u| over the interior collar
    double boundary_layer_sum_v = 0.0;
    double exp_mass_sum = 0.0;            // sum of e^u + e^v - 2 e^{u+v}
    double lambda = 0.0;
    double shift_L = 0.0;
    double source_mass = 0.0;             // B
    std::int64_t cg_iterations = 0;
};

namespace detail {

/// Sum over the boundary of the outward normal difference, for a field that
/// vanishes on the boundary: each box boundary point sees exactly one
/// interior neighbour, one inward step along its off-range axis.
inline double boundary_flux_zero_bc(const LatticeBox& box, std::span<const double> interior) {
    double flux = 0.0;
    for (std::int64_t j = 0; j < box.boundary_size(); ++j) {
        Point y = box.boundary_point(j);
        for (int d = 0; d < box.dim(); ++d) {
            if (y[d] < box.lo()[d]) {
                flux -= interior[box.interior_index(y.shifted(d, +1))];
                break;
            }
            if (y[d] > box.hi()[d]) {
                flux -= interior[box.interior_index(y.shifted(d, -1))];
                break;
            }
        }
    }
    return flux;
}

inline bool on_interior_collar(const LatticeBox& box, const Point& p) {
    for (int d = 0; d < box.dim(); ++d)
        if (p[d] == box.lo()[d] || p[d] == box.hi()[d]) return true;
    return false;
}

} // namespace detail

/// One sweep of the linearized iteration: starting from (u, v), solve
///   (Laplacian - L) u' = lambda e^v (e^u - 1) + g - L u
/// and its mirror image with zero boundary data, reading the previous pair
/// on both right-hand sides.
inline FieldPair iterate_once(const FieldPair& prev, const VortexConfig& cfg,
                              const SchemeParams& params) {
    params.validate();
    const BoxPtr& domain = prev.domain_ptr();
    if (cfg.dim() != domain->dim()) throw DomainError("config dimension mismatch");
    const std::int64_t N = domain->interior_size();

    LatticeFunction g = source_field(cfg, Side::U, domain);
    LatticeFunction h = source_field(cfg, Side::V, domain);

    LatticeFunction rhs_u(domain), rhs_v(domain);
    for (std::int64_t i = 0; i < N; ++i) {
        const double eu = std::exp(prev.u[i]), ev = std::exp(prev.v[i]);
        rhs_u[i] = params.lambda * ev * (eu - 1.0) + g[i] - params.shift_L * prev.u[i];
        rhs_v[i] = params.lambda * eu * (ev - 1.0) + h[i] - params.shift_L * prev.v[i];
    }
    LatticeFunction u = solve_shifted(domain, params.shift_L, rhs_u, params.linear);
    LatticeFunction v = solve_shifted(domain, params.shift_L, rhs_v, params.linear);
    return FieldPair(std::move(u), std::move(v));
}

/// Monotone solve on one box with zero boundary data, starting from the zero
/// pair. Internally each sweep solves for the increment
///   (Laplacian - L) d = -(nonlinear residual of the current pair),
/// which is the same sequence as iterate_once in exact arithmetic but keeps
/// the linear-solver noise proportional to the shrinking increments, so the
/// monotonicity certificate is meaningful down to 1e-12.
inline std::pair<FieldPair, SolveReport> solve_on_box(const BoxPtr& domain, const VortexConfig& cfg,
                                                      const SchemeParams& params) {
    params.validate();
    if (cfg.dim() != domain->dim()) throw DomainError("config dimension mismatch");
    if (!cfg.all_inside(*domain)) throw DomainError("source outside Ω");

    const std::int64_t N = domain->interior_size();
    const double lambda = params.lambda, L = params.shift_L;
    const double B = cfg.total_mass();

    LatticeFunction gf = source_field(cfg, Side::U, domain);
    LatticeFunction hf = source_field(cfg, Side::V, domain);
    std::span<const double> g = gf.interior();
    std::span<const double> h = hf.interior();

    std::vector<double> u(static_cast<std::size_t>(N), 0.0), v(static_cast<std::size_t>(N), 0.0);
    std::vector<double> eu(static_cast<std::size_t>(N), 1.0), ev(static_cast<std::size_t>(N), 1.0);
    std::vector<double> lap(static_cast<std::size_t>(N)), neg_s(static_cast<std::size_t>(N));

    SolveReport report;
    report.lambda = lambda;
    report.shift_L = L;
    report.source_mass = B;

    // Residual of one side into neg_s (negated: neg_s = -s = residual), and
    // returns its sup norm.`a` is the side being assembled, `eb` the other
    // side's exponential.
    auto assemble = [&](std::span<const double> a, std::span<const double> ea,
                        std::span<const double> eb, std::span<const double> src) {
        stencil::laplacian_zero_bc(*domain, a, lap);
        double sup = 0.0;
        for (std::int64_t i = 0; i < N; ++i) {
            const double resid = lap[i] - lambda * eb[i] * (ea[i] - 1.0) - src[i];
            neg_s[i] = resid;
            sup = std::max(sup, std::abs(resid));
        }
        return sup;
    };

    bool converged = false;
    for (std::int64_t k = 1; k <= params.max_outer; ++k) {
        SolveInfo info;

        // u sweep: (L + 2n) d - Adj d = -s_u = residual_u(current pair).
        assemble(u, eu, ev, g);
        std::vector<double> du = detail::cg_neg_shifted(*domain, L, {}, neg_s, params.linear, &info);
        report.cg_iterations += info.iterations;

        // v sweep still reads the pre-sweep u, mirroring the Jacobi update.
        assemble(v, ev, eu, h);
        std::vector<double> dv = detail::cg_neg_shifted(*domain, L, {}, neg_s, params.linear, &info);
        report.cg_iterations += info.iterations;

        double sup_du = 0.0, sup_dv = 0.0, max_up = 0.0;
        for (std::int64_t i = 0; i < N; ++i) {
            u[i] += du[i];
            v[i] += dv[i];
            sup_du = std::max(sup_du, std::abs(du[i]));
            sup_dv = std::max(sup_dv, std::abs(dv[i]));
            max_up = std::max({max_up, du[i], dv[i]});
        }
        for (std::int64_t i = 0; i < N; ++i) {
            eu[i] = std::exp(u[i]);
            ev[i] = std::exp(v[i]);
        }

        report.outer_iters = k;
        report.final_diff = sup_du + sup_dv;
        report.max_monotone_violation = std::max(report.max_monotone_violation, max_up);
        if (report.max_monotone_violation > 1e-12) {
            report.monotone_ok = false;
            throw SolverError("monotone iteration produced an increasing sweep",
                              report.max_monotone_violation);
        }
        if (report.final_diff <= params.stop_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("monotone iteration exceeded the outer budget", report.final_diff);

    report.residual_u = assemble(u, eu, ev, g);
    report.residual_v = assemble(v, ev, eu, h);
    const double residual_bound = 10.0 * params.stop_tol * (lambda + B);
    if (report.residual_u > residual_bound || report.residual_v > residual_bound)
        throw SolverError("converged iterate misses the residual contract",
                          std::max(report.residual_u, report.residual_v));

    // Flux identity per side: boundary flux + lambda-weighted mass = source total.
    double mass_u = 0.0, mass_v = 0.0, sum_g = 0.0, sum_h = 0.0, exp_mass = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        mass_u += ev[i] * (1.0 - eu[i]);
        mass_v += eu[i] * (1.0 - ev[i]);
        sum_g += g[i];
        sum_h += h[i];
        exp_mass += eu[i] + ev[i] - 2.0 * eu[i] * ev[i];
    }
    report.flux_defect_u =
        std::abs(detail::boundary_flux_zero_bc(*domain, u) + lambda * mass_u - sum_g);
    report.flux_defect_v =
        std::abs(detail::boundary_flux_zero_bc(*domain, v) + lambda * mass_v - sum_h);
    report.exp_mass_sum = exp_mass;

    for (std::int64_t i = 0; i < N; ++i) {
        if (!detail::on_interior_collar(*domain, domain->interior_point(i))) continue;
        report.boundary_layer_sum_u += std::abs(u[i]);
        report.boundary_layer_sum_v += std::abs(v[i]);
    }

    FieldPair out = FieldPair::zeros(domain);
    std::copy(u.begin(), u.end(), out.u.interior().begin());
    std::copy(v.begin(), v.end(), out.v.interior().begin());
    return {std::move(out), report};
}

/// Result of comparing a verified sub- or supersolution against the box
/// solution. `max_excess` is the largest amount by which the candidate sits
/// above the solution; a certificate holds when it stays within slack.
struct OrderingCertificate {
    bool ordered_u = true;
    bool ordered_v = true;
    double max_excess_u = 0.0;
    double max_excess_v = 0.0;
    std::optional<Point> witness_u;
    std::optional<Point> witness_v;
    bool ordered() const noexcept { return ordered_u && ordered_v; }
};

/// Verifies that (W, V) is a subsolution of the system on its own domain
/// (inequalities checked with slack 1e-9, nonpositive boundary data), then
/// solves on that domain and certifies W <= u and V <= v pointwise.
inline OrderingCertificate check_subsupersolution(const FieldPair& candidate,
                                                  const VortexConfig& cfg,
                                                  const SchemeParams& params) {
    params.validate();
    const BoxPtr& domain = candidate.domain_ptr();
    constexpr double slack = 1e-9;

    for (std::int64_t j = 0; j < domain->boundary_size(); ++j) {
        const Point& y = domain->boundary_point(j);
        if (candidate.u(y) > slack)
            throw DomainError("not a subsolution: positive boundary value of W at " + y.to_string());
        if (candidate.v(y) > slack)
            throw DomainError("not a subsolution: positive boundary value of V at " + y.to_string());
    }

    LatticeFunction g = source_field(cfg, Side::U, domain);
    LatticeFunction h = source_field(cfg, Side::V, domain);
    for (std::int64_t i = 0; i < domain->interior_size(); ++i) {
        Point x = domain->interior_point(i);
        const double W = candidate.u[i], V = candidate.v[i];
        if (laplacian(candidate.u, x) - params.lambda * std::exp(V) * (std::exp(W) - 1.0) - g[i] <
            -slack)
            throw DomainError("not a subsolution: first inequality fails at " + x.to_string());
        if (laplacian(candidate.v, x) - params.lambda * std::exp(W) * (std::exp(V) - 1.0) - h[i] <
            -slack)
            throw DomainError("not a subsolution: second inequality fails at " + x.to_string());
    }

    auto [solution, report] = solve_on_box(domain, cfg, params);
    (void)report;

    OrderingCertificate cert;
    for (std::int64_t i = 0; i < domain->closure_size(); ++i) {
        const Point x = domain->closure_point(i);
        const double eu = candidate.u[i] - solution.u[i];
        const double evx = candidate.v[i] - solution.v[i];
        if (eu > cert.max_excess_u) {
            cert.max_excess_u = eu;
            cert.witness_u = x;
        }
        if (evx > cert.max_excess_v) {
            cert.max_excess_v = evx;
            cert.witness_v = x;
        }
    }
    cert.ordered_u = cert.max_excess_u <= slack;
    cert.ordered_v = cert.max_excess_v <= slack;
    return cert;
}

} // namespace latcs
