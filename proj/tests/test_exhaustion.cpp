#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "latcs/exhaustion.hpp"

using namespace latcs;

TEST_CASE("exhaustion converges on the window and records stage differences") {
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p = SchemeParams::for_lambda(1.0);
    std::vector<int> radii{8, 10, 13};

    MaximalSolution sol = solve_maximal(cfg, p, radii, 6, 1e-6);
    CHECK(sol.final_radius == 13);
    REQUIRE(sol.stages.size() == 3);
    CHECK(sol.stages[0].window_diff == 0.0);
    CHECK(sol.stages[1].window_diff > 1e-6);     // radius 8 -> 10 still moving
    CHECK(sol.stages[2].window_diff <= 1e-6);    // radius 10 -> 13 settled
    CHECK(sol.stages[1].window_diff > sol.stages[2].window_diff);
    for (const RadiusStage& s : sol.stages) CHECK(s.report.monotone_ok);

    // The window carries the deep core of the solution.
    CHECK(sol.fields.u(Point{0, 0}) < -4.0);
    CHECK(sol.fields.v.sup_norm() == 0.0);
}

TEST_CASE("exhausted radii raise an error that lists the differences") {
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p = SchemeParams::for_lambda(1.0);
    std::vector<int> radii{8, 10};
    try {
        solve_maximal(cfg, p, radii, 6, 1e-9);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(std::string(e.what()).find("differences:") != std::string::npos);
        CHECK(e.residual() > 1e-9);
    }
}

TEST_CASE("growing the domain only lowers the solution") {
    VortexConfig cfg(2, {{Point{0, 0}, 1}, {Point{2, 1}, 1}}, {{Point{-1, 0}, 1}});
    SchemeParams p = SchemeParams::for_lambda(0.8);
    auto window = make_centered_box(2, 5);

    auto [small_fields, r1] = solve_on_box(make_centered_box(2, 8), cfg, p);
    auto [large_fields, r2] = solve_on_box(make_centered_box(2, 12), cfg, p);

    for (std::int64_t i = 0; i < window->closure_size(); ++i) {
        Point x = window->closure_point(i);
        CHECK(large_fields.u(x) <= small_fields.u(x) + 1e-12);
        CHECK(large_fields.v(x) <= small_fields.v(x) + 1e-12);
    }
}

TEST_CASE("maximal solutions are translation equivariant") {
    VortexConfig cfg(2, {{Point{0, 0}, 1}, {Point{1, 1}, 1}}, {});
    Point t{3, -2};
    VortexConfig moved = cfg.translated(t);
    SchemeParams p = SchemeParams::for_lambda(1.0);
    std::vector<int> radii{7, 9, 12};

    MaximalSolution a = solve_maximal(cfg, p, radii, 5, 1e-3);
    MaximalSolution b = solve_maximal(moved, p, radii, 5, 1e-3);

    REQUIRE(a.center + t == b.center);
    double m = 0.0;
    for (std::int64_t i = 0; i < a.window->closure_size(); ++i) {
        Point x = a.window->closure_point(i);
        m = std::max(m, std::abs(a.fields.u(x) - b.fields.u(x + t)));
        m = std::max(m, std::abs(a.fields.v(x) - b.fields.v(x + t)));
    }
    CHECK(m <= 1e-10);
}

TEST_CASE("window must fit inside the smallest box") {
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    SchemeParams p = SchemeParams::for_lambda(1.0);
    std::vector<int> radii{6, 9};
    CHECK_THROWS_WITH(solve_maximal(cfg, p, radii, 6, 1e-6),
                      "window does not fit inside the smallest box");
    // Two distant vortices: the window sits at their centroid and misses both.
    CHECK_THROWS_WITH(solve_maximal(VortexConfig(2, {{Point{0, 0}, 1}, {Point{12, 0}, 1}}, {}), p,
                                    std::vector<int>{9, 12}, 5, 1e-6),
                      "source outside window");
}

TEST_CASE("decay fit clears the guaranteed rate with a tight fit") {
    VortexConfig cfg(2, {{Point{0, 0}, 1}}, {});
    MaximalSolution sol =
        solve_maximal(cfg, SchemeParams::for_lambda(1.0), std::vector<int>{10, 14, 19}, 8, 1e-6);

    DecayFit fit = estimate_decay_rate(sol, 0);
    CHECK(fit.points_used == 7); // t = 0..6, two steps clear of the edge
    CHECK(fit.rate >= 0.8 * guaranteed_decay_rate(1.0, 2));
    CHECK(fit.r2 >= 0.98);
    // Axis symmetry: both axes see the same profile.
    DecayFit fit1 = estimate_decay_rate(sol, 1);
    CHECK(std::abs(fit.rate - fit1.rate) <= 1e-8);
}

TEST_CASE("decay fit rejects trivial solutions") {
    VortexConfig empty(2, {}, {});
    MaximalSolution sol =
        solve_maximal(empty, SchemeParams::for_lambda(1.0), std::vector<int>{8, 10}, 5, 1e-6);
    CHECK_THROWS_WITH(estimate_decay_rate(sol, 0), "window too small or solution trivial");
    CHECK_THROWS_AS(estimate_decay_rate(sol, 5), DomainError); // bad axis
}

TEST_CASE("guaranteed decay rate formula") {
    using Catch::Matchers::WithinRel;
    CHECK_THAT(guaranteed_decay_rate(1.0, 2), WithinRel(std::log(1.25), 1e-15));
    CHECK_THAT(guaranteed_decay_rate(4.0, 2), WithinRel(std::log(2.0), 1e-15));
    CHECK_THAT(guaranteed_decay_rate(1.0, 3), WithinRel(std::log(1.0 + 1.0 / 6.0), 1e-15));
}
