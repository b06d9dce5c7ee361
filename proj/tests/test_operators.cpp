#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "latcs/linear_solver.hpp"
#include "latcs/operators.hpp"

using namespace latcs;
using Catch::Matchers::WithinAbs;

namespace {

std::mt19937_64 rng(0x1a7c5u);

BoxPtr random_box(int dim, int max_width) {
    Point lo = Point::zero(dim), hi = Point::zero(dim);
    for (int i = 0; i < dim; ++i) {
        lo[i] = static_cast<int>(rng() % 9) - 4;
        hi[i] = lo[i] + 1 + static_cast<int>(rng() % static_cast<unsigned>(max_width - 1));
    }
    return make_box(lo, hi);
}

LatticeFunction random_field(const BoxPtr& box) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    LatticeFunction f(box);
    for (std::int64_t i = 0; i < box->closure_size(); ++i) f[i] = dist(rng);
    return f;
}

double naive_laplacian(const LatticeFunction& f, const Point& x) {
    double s = 0.0;
    for (const Point& y : neighbors(x)) s += f(y) - f(x);
    return s;
}

} // namespace

TEST_CASE("laplacian is the neighbour sum minus 2n times the value") {
    for (int dim : {2, 3, 4}) {
        auto box = random_box(dim, 4);
        LatticeFunction f = random_field(box);
        for (int k = 0; k < 20; ++k) {
            Point x = box->interior_point(static_cast<std::int64_t>(rng() % box->interior_size()));
            CHECK_THAT(laplacian(f, x), WithinAbs(naive_laplacian(f, x), 1e-14));
        }
    }
}

TEST_CASE("laplacian outside the interior is rejected") {
    auto box = make_centered_box(2, 2);
    LatticeFunction f(box);
    CHECK_THROWS_WITH(laplacian(f, Point{3, 0}), "stencil outside domain");
    CHECK_THROWS_WITH(laplacian(f, Point{9, 9}), "stencil outside domain");
}

TEST_CASE("apply_shifted agrees with pointwise laplacian minus shift") {
    for (int trial = 0; trial < 10; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        auto box = random_box(dim, 5);
        LatticeFunction f = random_field(box); // nonzero boundary data on purpose
        double L = 0.3 + 2.0 * static_cast<double>(rng() % 1000) / 1000.0;
        LatticeFunction g = apply_shifted(f, L);
        for (std::int64_t i = 0; i < box->interior_size(); ++i) {
            Point x = box->interior_point(i);
            CHECK_THAT(g[i], WithinAbs(laplacian(f, x) - L * f[i], 1e-12));
        }
        for (std::int64_t j = 0; j < box->boundary_size(); ++j)
            CHECK(g[box->interior_size() + j] == 0.0);
    }
}

TEST_CASE("zero-Dirichlet laplacian kernel matches the pointwise operator") {
    auto box = random_box(3, 5);
    LatticeFunction f = random_field(box);
    for (double& b : f.boundary_values()) b = 0.0;
    std::vector<double> out(static_cast<std::size_t>(box->interior_size()));
    stencil::laplacian_zero_bc(*box, f.interior(), out);
    for (std::int64_t i = 0; i < box->interior_size(); ++i)
        CHECK_THAT(out[i], WithinAbs(laplacian(f, box->interior_point(i)), 1e-13));
}

TEST_CASE("boundary neighbour accumulation matches direct enumeration") {
    for (int dim : {2, 3}) {
        auto box = random_box(dim, 4);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> bvals(static_cast<std::size_t>(box->boundary_size()));
        for (double& v : bvals) v = dist(rng);

        std::vector<double> fast(static_cast<std::size_t>(box->interior_size()), 0.0);
        stencil::add_boundary_neighbors(*box, bvals, fast);

        for (std::int64_t i = 0; i < box->interior_size(); ++i) {
            Point x = box->interior_point(i);
            double want = 0.0;
            for (const Point& y : neighbors(x))
                if (box->on_boundary(y)) want += bvals[box->boundary_index(y)];
            CHECK_THAT(fast[i], WithinAbs(want, 1e-14));
        }
    }
}

TEST_CASE("summation by parts with vanishing test function") {
    // With f = 0 on the boundary the form reduces to -sum f * laplacian(g).
    for (int trial = 0; trial < 20; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        auto box = random_box(dim, 4);
        LatticeFunction f = random_field(box);
        for (double& b : f.boundary_values()) b = 0.0;
        LatticeFunction g = random_field(box);

        double rhs = 0.0;
        for (std::int64_t i = 0; i < box->interior_size(); ++i)
            rhs -= f[i] * laplacian(g, box->interior_point(i));
        CHECK_THAT(dirichlet_form(f, g), WithinAbs(rhs, 1e-12));
    }
}

TEST_CASE("summation by parts with boundary term") {
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        auto box = random_box(dim, 4);
        LatticeFunction f = random_field(box);
        LatticeFunction g = random_field(box);

        double rhs = 0.0;
        for (std::int64_t i = 0; i < box->interior_size(); ++i)
            rhs -= f[i] * laplacian(g, box->interior_point(i));
        for (const Point& y : box->boundary()) rhs += f(y) * normal_derivative(g, y);

        CHECK_THAT(dirichlet_form(f, g), WithinAbs(rhs, 1e-12));
        CHECK_THAT(dirichlet_form(f, g), WithinAbs(dirichlet_form(g, f), 1e-12));
    }
}

TEST_CASE("boundary flux sums to the interior laplacian total") {
    for (int trial = 0; trial < 20; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        auto box = random_box(dim, 5);
        LatticeFunction u = random_field(box);

        double flux = 0.0;
        for (const Point& y : box->boundary()) flux += normal_derivative(u, y);
        double bulk = 0.0;
        for (std::int64_t i = 0; i < box->interior_size(); ++i)
            bulk += laplacian(u, box->interior_point(i));
        CHECK_THAT(flux, WithinAbs(bulk, 1e-12));
    }
}

TEST_CASE("maximum principle for the shifted operator") {
    // (laplacian - c) v = r >= 0 with v <= 0 on the boundary forces v <= 0.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 2);
        auto box = random_box(dim, dim == 2 ? 10 : 6);
        const std::int64_t N = box->interior_size();

        std::vector<double> c(static_cast<std::size_t>(N));
        for (double& ci : c) ci = (unit(rng) < 0.3) ? 0.0 : 3.0 * unit(rng);
        std::vector<double> r(static_cast<std::size_t>(N));
        for (double& ri : r) ri = unit(rng);
        std::vector<double> bdata(static_cast<std::size_t>(box->boundary_size()));
        for (double& bi : bdata) bi = -unit(rng);

        SolverParams params;
        params.tol = 1e-13;
        std::vector<double> v = solve_dirichlet_interior(*box, c, r, bdata, params);
        double vmax = -1e300;
        for (double vi : v) vmax = std::max(vmax, vi);
        CHECK(vmax <= 1e-10);
    }
}
