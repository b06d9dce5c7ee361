#pragma once

#include <cfloat>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "latcs/monotone_scheme.hpp"

namespace latcs {

/// One box of the exhausting chain: its radius, the solver report, and the
/// sup-norm distance to the previous stage restricted to the window.
struct RadiusStage {
    int radius = 0;
    double window_diff = 0.0; // max over both fields; zero for the first stage
    SolveReport report;
};

/// Limit object produced by exhausting Z^n with growing boxes: the fields on
/// a fixed observation window once consecutive stages agree to ext_tol.
struct MaximalSolution {
    FieldPair fields;  // on the window closure
    BoxPtr window;
    Point center;
    double lambda = 0.0;
    double ext_tol = 0.0;
    std::vector<RadiusStage> stages;
    int final_radius = 0;
};

namespace detail {

/// Copies a solution on a large box onto the window closure (which must sit
/// strictly inside the box interior).
inline FieldPair restrict_to_window(const FieldPair& big, const BoxPtr& window) {
    FieldPair out = FieldPair::zeros(window);
    for (std::int64_t i = 0; i < window->closure_size(); ++i) {
        Point x = window->closure_point(i);
        out.u[i] = big.u(x);
        out.v[i] = big.v(x);
    }
    return out;
}

inline double pair_sup_diff(const FieldPair& a, const FieldPair& b) {
    double m = 0.0;
    for (std::int64_t i = 0; i < a.domain().closure_size(); ++i) {
        m = std::max(m, std::abs(a.u[i] - b.u[i]));
        m = std::max(m, std::abs(a.v[i] - b.v[i]));
    }
    return m;
}

} // namespace detail

/// Solves on each box of the increasing radii chain, all centered at the
/// vortex centroid, and returns the window restriction once two consecutive
/// stages differ by at most ext_tol in sup norm over the window closure.
///
/// Requires the window closure inside the smallest box interior and every
/// vortex inside the window. Exhausting the chain without convergence is an
/// error that lists the observed difference sequence.
inline MaximalSolution solve_maximal(const VortexConfig& cfg, const SchemeParams& scheme,
                                     std::span<const int> radii, int window_radius,
                                     double ext_tol) {
    scheme.validate();
    if (radii.empty()) throw DomainError("empty exhaustion");
    if (!(ext_tol > 0.0)) throw DomainError("exhaustion tolerance must be positive");

    const Point center = cfg.centroid();
    Exhaustion chain(cfg.dim(), center, std::vector<int>(radii.begin(), radii.end()));
    BoxPtr window = make_centered_box(cfg.dim(), window_radius, center);
    if (window_radius + 1 > chain.radius(0))
        throw DomainError("window does not fit inside the smallest box");
    if (!cfg.all_inside(*window)) throw DomainError("source outside window");

    MaximalSolution sol{FieldPair::zeros(window), window, center, scheme.lambda, ext_tol, {}, 0};

    FieldPair prev = FieldPair::zeros(window); // placeholder until the first stage lands
    for (int k = 0; k < chain.size(); ++k) {
        auto [big, report] = solve_on_box(chain.box(k), cfg, scheme);
        FieldPair cur = detail::restrict_to_window(big, window);

        RadiusStage stage;
        stage.radius = chain.radius(k);
        stage.report = report;
        if (k > 0) {
            stage.window_diff = detail::pair_sup_diff(cur, prev);
            sol.stages.push_back(stage);
            if (stage.window_diff <= ext_tol) {
                sol.fields = std::move(cur);
                sol.final_radius = stage.radius;
                return sol;
            }
        } else {
            sol.stages.push_back(stage);
        }
        prev = std::move(cur);
        sol.fields = prev; // keep the last restriction available to error paths
        sol.final_radius = stage.radius;
    }

    std::ostringstream msg;
    msg << "exhaustion radii exhausted before tolerance " << ext_tol << "; differences:";
    for (const RadiusStage& s : sol.stages)
        if (s.radius != chain.radius(0)) msg << " " << s.window_diff;
    throw SolverError(msg.str(), sol.stages.back().window_diff);
}

/// Least-squares exponential decay fit along one lattice axis.
struct DecayFit {
    double rate = 0.0;      // positive decay exponent per lattice step
    double r2 = 0.0;        // coefficient of determination of the log fit
    double intercept = 0.0; // fitted ln|u| at t = 0
    int points_used = 0;
};

/// Fits ln|u(center + t e_axis)| against t on the window. Points too small
/// to trust (|u| < 100 eps) and points within two steps of the window edge
/// are discarded; fewer than five surviving points is an error.
inline DecayFit estimate_decay_rate(const MaximalSolution& sol, int axis) {
    const LatticeBox& win = *sol.window;
    if (axis < 0 || axis >= win.dim()) throw DomainError("axis out of range");
    const double sup = std::max(sol.fields.u.sup_norm(), sol.fields.v.sup_norm());
    if (!(sup > 10.0 * sol.ext_tol)) throw DomainError("window too small or solution trivial");

    const int wr = static_cast<int>(win.hi()[axis] - sol.center[axis]);
    std::vector<double> ts, ys;
    for (int t = 0; t <= wr - 2; ++t) { // stay two steps clear of the window edge
        Point x = sol.center.shifted(axis, t);
        const double a = std::abs(sol.fields.u(x));
        if (a < 100.0 * DBL_EPSILON) continue;
        ts.push_back(static_cast<double>(t));
        ys.push_back(std::log(a));
    }
    if (ts.size() < 5) throw DomainError("window too small or solution trivial");

    const double n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
    }
    const double tbar = st / n, ybar = sy / n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tbar) * (ts[i] - tbar);
        sty += (ts[i] - tbar) * (ys[i] - ybar);
        syy += (ys[i] - ybar) * (ys[i] - ybar);
    }
    const double slope = sty / stt;

    DecayFit fit;
    fit.rate = -slope;
    fit.intercept = ybar - slope * tbar;
    fit.points_used = static_cast<int>(ts.size());
    double ss_res = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double pred = fit.intercept + slope * ts[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 0.0;
    return fit;
}

/// The decay exponent the theory guarantees: ln(1 + lambda / 2n).
inline double guaranteed_decay_rate(double lambda, int dim) {
    return std::log1p(lambda / (2.0 * dim));
}

} // namespace latcs
