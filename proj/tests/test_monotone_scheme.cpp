#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "latcs/monotone_scheme.hpp"
#include "latcs/newton.hpp"

using namespace latcs;
using Catch::Matchers::WithinAbs;

namespace {

std::mt19937_64 rng(0x5eedu);

double sup_diff(const LatticeFunction& a, const LatticeFunction& b) {
    double m = 0.0;
    for (std::int64_t i = 0; i < a.domain().closure_size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("shift at or below twice the coupling is rejected") {
    auto box = make_centered_box(2, 3);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p;
    p.lambda = 1.0;
    p.shift_L = 2.0;
    CHECK_THROWS_WITH(iterate_once(FieldPair::zeros(box), cfg, p), "shift too small");
    CHECK_THROWS_WITH(solve_on_box(box, cfg, p), "shift too small");
    p.shift_L = 2.0 + 1e-9; // strict inequality is enough
    CHECK_NOTHROW(iterate_once(FieldPair::zeros(box), cfg, p));
}

TEST_CASE("default shift is 2.5 times the coupling") {
    SchemeParams p = SchemeParams::for_lambda(3.0);
    CHECK(p.lambda == 3.0);
    CHECK(p.shift_L == 7.5);
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("first sweep from zero matches the dense direct solve") {
    // Single vortex of multiplicity 1 at the origin, radius-4 box in Z^2,
    // lambda = 1, L = 2.5. Reference value from an independent dense
    // factorization of the shifted system.
    auto box = make_centered_box(2, 4);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p = SchemeParams::for_lambda(1.0);

    FieldPair first = iterate_once(FieldPair::zeros(box), cfg, p);
    CHECK_THAT(first.u(Point{0, 0}), WithinAbs(-2.1698803025165523, 1e-9));
    for (std::int64_t i = 0; i < box->closure_size(); ++i) {
        CHECK(first.u[i] <= 0.0);
        CHECK(first.v[i] == 0.0); // empty v-side source keeps v at exactly zero
    }
}

TEST_CASE("sweeps decrease monotonically from zero") {
    auto box = make_centered_box(2, 4);
    VortexConfig cfg(2, {{Point{1, 0}, 2}}, {{Point{-1, 0}, 1}});
    SchemeParams p = SchemeParams::for_lambda(1.5);

    FieldPair a = FieldPair::zeros(box);
    for (int k = 0; k < 4; ++k) {
        FieldPair b = iterate_once(a, cfg, p);
        for (std::int64_t i = 0; i < box->closure_size(); ++i) {
            CHECK(b.u[i] <= a.u[i] + 1e-12);
            CHECK(b.v[i] <= a.v[i] + 1e-12);
        }
        a = std::move(b);
    }
}

TEST_CASE("empty source solves to zero in one sweep") {
    auto box = make_centered_box(3, 2);
    VortexConfig cfg(3, {}, {});
    auto [fields, report] = solve_on_box(box, cfg, SchemeParams::for_lambda(2.0));
    CHECK(fields.u.sup_norm() == 0.0);
    CHECK(fields.v.sup_norm() == 0.0);
    CHECK(report.outer_iters == 1);
    CHECK(report.flux_defect_u == 0.0);
    CHECK(report.residual_u == 0.0);
    CHECK(report.monotone_ok);
}

TEST_CASE("difference sweeps reproduce the plain iteration") {
    auto box = make_centered_box(2, 3);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {{Point{1, 1}, 1}});
    SchemeParams p = SchemeParams::for_lambda(1.0);
    p.stop_tol = 1e-3; // stop early so intermediate iterates are comparable

    auto [fields, report] = solve_on_box(box, cfg, p);
    FieldPair chain = FieldPair::zeros(box);
    for (std::int64_t k = 0; k < report.outer_iters; ++k) chain = iterate_once(chain, cfg, p);

    CHECK(sup_diff(fields.u, chain.u) <= 1e-9);
    CHECK(sup_diff(fields.v, chain.v) <= 1e-9);
}

TEST_CASE("converged solve matches the frozen reference and its contracts") {
    // Radius-6 box in Z^2, single unit vortex, lambda = 1. The value at the
    // origin comes from an independent dense Newton run.
    auto box = make_centered_box(2, 6);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p = SchemeParams::for_lambda(1.0);

    auto [fields, report] = solve_on_box(box, cfg, p);
    CHECK_THAT(fields.u(Point{0, 0}), WithinAbs(-4.1950470894537935, 1e-8));
    CHECK_THAT(fields.u(Point{1, 0}), WithinAbs(-1.2996869276625589, 1e-8));
    CHECK_THAT(fields.u(Point{3, 2}), WithinAbs(-0.05621048869477372, 1e-8));

    const double B = cfg.total_mass();
    CHECK(report.monotone_ok);
    CHECK(report.max_monotone_violation <= 1e-12);
    CHECK(report.residual_u <= 10.0 * p.stop_tol * (p.lambda + B));
    CHECK(report.residual_v <= 10.0 * p.stop_tol * (p.lambda + B));
    const double flux_bound = 1e-8 * (p.lambda * static_cast<double>(box->interior_size()) + B);
    CHECK(report.flux_defect_u <= flux_bound);
    CHECK(report.flux_defect_v <= flux_bound);
    CHECK(report.boundary_layer_sum_u < B);
    CHECK(report.boundary_layer_sum_v < B);
    CHECK(report.exp_mass_sum <= B / p.lambda + 1e-8);

    // v never leaves zero without an h-side source.
    CHECK(fields.v.sup_norm() == 0.0);
    // Fields are nonpositive and vanish on the boundary.
    for (std::int64_t i = 0; i < box->closure_size(); ++i) CHECK(fields.u[i] <= 0.0);
    for (std::int64_t j = 0; j < box->boundary_size(); ++j)
        CHECK(fields.u[box->interior_size() + j] == 0.0);
}

TEST_CASE("solve agrees with damped Newton on random configurations") {
    for (int trial = 0; trial < 6; ++trial) {
        const int dim = (trial % 2) ? 3 : 2;
        const int radius = dim == 2 ? 5 : 2;
        auto box = make_centered_box(dim, radius);

        std::vector<std::pair<Point, int>> us, vs;
        const int nu = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < nu; ++k) {
            Point p = Point::zero(dim);
            for (int d = 0; d < dim; ++d) p[d] = static_cast<int>(rng() % 3) - 1;
            us.emplace_back(p, 1 + static_cast<int>(rng() % 2));
        }
        if (trial % 3 == 0) vs.emplace_back(Point::zero(dim), 1);
        VortexConfig cfg(dim, us, vs);

        const double lambda = 0.25 + 3.75 * static_cast<double>(rng() % 1000) / 999.0;
        SchemeParams p = SchemeParams::for_lambda(lambda);

        auto [fields, report] = solve_on_box(box, cfg, p);
        NewtonResult ref = newton_solve(box, cfg, lambda);
        REQUIRE(ref.converged);

        CHECK(sup_diff(fields.u, ref.fields.u) <= 1e-8);
        CHECK(sup_diff(fields.v, ref.fields.v) <= 1e-8);
    }
}

TEST_CASE("sources must lie inside the domain") {
    auto box = make_centered_box(2, 4);
    VortexConfig cfg(2, {{Point{10, 0}, 1}}, {});
    CHECK_THROWS_WITH(solve_on_box(box, cfg, SchemeParams::for_lambda(1.0)),
                      "source outside Ω");
}

TEST_CASE("outer budget exhaustion throws with the last difference") {
    auto box = make_centered_box(2, 5);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p = SchemeParams::for_lambda(1.0);
    p.max_outer = 2;
    try {
        solve_on_box(box, cfg, p);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("constant pairs deep below zero are not subsolutions") {
    auto box = make_centered_box(2, 4);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p = SchemeParams::for_lambda(1.0);

    FieldPair cand = FieldPair::zeros(box);
    for (std::int64_t i = 0; i < box->closure_size(); ++i) {
        cand.u[i] = -3.0;
        cand.v[i] = -3.0;
    }
    // At the vortex site the source term 4*pi breaks the first inequality.
    CHECK_THROWS_WITH(check_subsupersolution(cand, cfg, p),
                      Catch::Matchers::ContainsSubstring("first inequality fails at (0,0)"));
}

TEST_CASE("the zero pair certifies against the empty configuration") {
    auto box = make_centered_box(2, 3);
    VortexConfig cfg(2, {}, {});
    OrderingCertificate cert =
        check_subsupersolution(FieldPair::zeros(box), cfg, SchemeParams::for_lambda(1.0));
    CHECK(cert.ordered());
    CHECK(cert.max_excess_u <= 1e-9);
}

TEST_CASE("a solve certifies as a subsolution of itself") {
    auto box = make_centered_box(2, 5);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {{Point{2, 1}, 1}});
    SchemeParams p = SchemeParams::for_lambda(2.0);
    p.stop_tol = 1e-12; // push the residual well under the verification slack

    auto [fields, report] = solve_on_box(box, cfg, p);
    OrderingCertificate cert = check_subsupersolution(fields, cfg, p);
    CHECK(cert.ordered());
}

TEST_CASE("positive boundary data disqualifies a candidate") {
    auto box = make_centered_box(2, 3);
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    FieldPair cand = FieldPair::zeros(box);
    cand.u[box->interior_size()] = 0.5; // first boundary slot
    CHECK_THROWS_WITH(check_subsupersolution(cand, cfg, SchemeParams::for_lambda(1.0)),
                      Catch::Matchers::ContainsSubstring("positive boundary value"));
}
