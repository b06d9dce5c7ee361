#pragma once

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <string>
#include <vector>

#include "latcs/operators.hpp"
#include "latcs/vortex.hpp"

namespace latcs {

/// Damped Newton solver for the coupled system
///   Laplacian u = lambda e^v (e^u - 1) + g,
///   Laplacian v = lambda e^u (e^v - 1) + h,
/// with zero Dirichlet data on a box. This is the reference path used to
/// cross-check the monotone scheme; it shares no linear algebra with it
/// (Eigen factorizations vs. the hand-rolled conjugate gradient).
struct NewtonParams {
    double tol = 1e-12;   // sup-norm residual target
    int max_iter = 80;
    int max_backtrack = 50;
    bool force_dense = false;
};

struct NewtonResult {
    FieldPair fields;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::string linear_path; // "dense-lu", "sparse-lu" or "bicgstab"
};

namespace detail {

/// Residual of the system at interior points, in the layout [u-block; v-block].
inline void nonlinear_residual(const LatticeBox& box, double lambda,
                               std::span<const double> g, std::span<const double> h,
                               const Eigen::VectorXd& x, Eigen::VectorXd& F,
                               std::vector<double>& lap_scratch) {
    const std::int64_t N = box.interior_size();
    std::span<const double> u(x.data(), static_cast<std::size_t>(N));
    std::span<const double> v(x.data() + N, static_cast<std::size_t>(N));
    std::span<double> lap(lap_scratch);

    stencil::laplacian_zero_bc(box, u, lap);
    for (std::int64_t i = 0; i < N; ++i)
        F[i] = lap[i] - lambda * std::exp(v[i]) * (std::exp(u[i]) - 1.0) - g[i];
    stencil::laplacian_zero_bc(box, v, lap);
    for (std::int64_t i = 0; i < N; ++i)
        F[N + i] = lap[i] - lambda * std::exp(u[i]) * (std::exp(v[i]) - 1.0) - h[i];
}

} // namespace detail

inline NewtonResult newton_solve(const BoxPtr& domain, const VortexConfig& cfg, double lambda,
                                 const FieldPair* start = nullptr, const NewtonParams& params = {}) {
    if (!(lambda > 0.0)) throw DomainError("coupling must be positive");
    if (cfg.dim() != domain->dim()) throw DomainError("config dimension mismatch");
    if (!cfg.all_inside(*domain)) throw DomainError("source outside Ω");

    const std::int64_t N = domain->interior_size();
    const std::int64_t M = 2 * N;
    LatticeFunction gf = source_field(cfg, Side::U, domain);
    LatticeFunction hf = source_field(cfg, Side::V, domain);
    std::span<const double> g = gf.interior();
    std::span<const double> h = hf.interior();

    Eigen::VectorXd x = Eigen::VectorXd::Zero(M);
    if (start) {
        if (!(start->domain() == *domain)) throw DomainError("start guess domain mismatch");
        for (std::int64_t i = 0; i < N; ++i) {
            x[i] = start->u.interior()[i];
            x[N + i] = start->v.interior()[i];
        }
    }

    std::vector<double> lap_scratch(static_cast<std::size_t>(N));
    Eigen::VectorXd F(M), Fnew(M), xnew(M);
    detail::nonlinear_residual(*domain, lambda, g, h, x, F, lap_scratch);
    double fnorm = F.lpNorm<Eigen::Infinity>();

    const bool dense = params.force_dense || M <= 600;
    const bool sparse_direct = M <= 30000;
    NewtonResult result{FieldPair::zeros(domain)};
    result.linear_path = dense ? "dense-lu" : (sparse_direct ? "sparse-lu" : "bicgstab");

    int it = 0;
    for (; it < params.max_iter && fnorm > params.tol; ++it) {
        // Jacobian: graph Laplacian blocks minus the exponential diagonals.
        Eigen::VectorXd du_diag(N), dv_diag(N), cu_diag(N), cv_diag(N);
        for (std::int64_t i = 0; i < N; ++i) {
            const double eu = std::exp(x[i]), ev = std::exp(x[N + i]);
            du_diag[i] = -2.0 * domain->dim() - lambda * eu * ev;
            dv_diag[i] = du_diag[i];
            cu_diag[i] = -lambda * ev * (eu - 1.0); // dF_u / dv
            cv_diag[i] = -lambda * eu * (ev - 1.0); // dF_v / du
        }

        Eigen::VectorXd step(M);
        if (dense) {
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(M, M);
            for (std::int64_t i = 0; i < N; ++i) {
                J(i, i) = du_diag[i];
                J(N + i, N + i) = dv_diag[i];
                J(i, N + i) = cu_diag[i];
                J(N + i, i) = cv_diag[i];
                Point p = domain->interior_point(i);
                for_each_neighbor(p, [&](const Point& q) {
                    if (!domain->contains(q)) return;
                    const std::int64_t j = domain->interior_index(q);
                    J(i, j) += 1.0;
                    J(N + i, N + j) += 1.0;
                });
            }
            step = J.partialPivLu().solve(-F);
        } else {
            std::vector<Eigen::Triplet<double>> trips;
            trips.reserve(static_cast<std::size_t>(M * (2 * domain->dim() + 2)));
            for (std::int64_t i = 0; i < N; ++i) {
                trips.emplace_back(i, i, du_diag[i]);
                trips.emplace_back(N + i, N + i, dv_diag[i]);
                trips.emplace_back(i, N + i, cu_diag[i]);
                trips.emplace_back(N + i, i, cv_diag[i]);
                Point p = domain->interior_point(i);
                for_each_neighbor(p, [&](const Point& q) {
                    if (!domain->contains(q)) return;
                    const std::int64_t j = domain->interior_index(q);
                    trips.emplace_back(i, j, 1.0);
                    trips.emplace_back(N + i, N + j, 1.0);
                });
            }
            Eigen::SparseMatrix<double> J(M, M);
            J.setFromTriplets(trips.begin(), trips.end());
            if (sparse_direct) {
                Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
                if (lu.info() != Eigen::Success) throw SolverError("Jacobian factorization failed", fnorm);
                step = lu.solve(-F);
            } else {
                Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
                krylov.setTolerance(1e-13);
                krylov.setMaxIterations(4000);
                krylov.compute(J);
                step = krylov.solve(-F);
                if (krylov.info() != Eigen::Success)
                    throw SolverError("Jacobian Krylov solve failed", fnorm);
            }
        }

        // Backtracking on the sup norm of the residual.
        double s = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < params.max_backtrack; ++bt) {
            xnew = x + s * step;
            detail::nonlinear_residual(*domain, lambda, g, h, xnew, Fnew, lap_scratch);
            const double fn = Fnew.lpNorm<Eigen::Infinity>();
            if (fn < (1.0 - 1e-4 * s) * fnorm) {
                x.swap(xnew);
                F.swap(Fnew);
                fnorm = fn;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) break; // stagnated; report what we have
    }

    for (std::int64_t i = 0; i < N; ++i) {
        result.fields.u.interior()[i] = x[i];
        result.fields.v.interior()[i] = x[N + i];
    }
    result.converged = fnorm <= params.tol;
    result.iterations = it;
    result.residual = fnorm;
    return result;
}

} // namespace latcs
