#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "latcs/box.hpp"
#include "latcs/point.hpp"

using namespace latcs;

namespace {

// Brute-force boundary enumeration, kept deliberately independent of the
// library: plain coordinate vectors in std::set, neighbour loop by hand.
std::set<std::vector<int>> brute_boundary(const std::set<std::vector<int>>& interior) {
    std::set<std::vector<int>> bdry;
    for (const auto& p : interior) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (int step : {-1, +1}) {
                std::vector<int> q = p;
                q[i] += step;
                if (!interior.count(q)) bdry.insert(q);
            }
        }
    }
    return bdry;
}

std::set<std::vector<int>> box_interior_set(const LatticeBox& box) {
    std::set<std::vector<int>> pts;
    for (std::int64_t i = 0; i < box.interior_size(); ++i) {
        Point p = box.interior_point(i);
        pts.insert(std::vector<int>(p.begin(), p.end()));
    }
    return pts;
}

} // namespace

TEST_CASE("neighbors are the 2n adjacent points") {
    Point p{3, -1, 4};
    auto nb = neighbors(p);
    REQUIRE(nb.size() == 6);
    std::set<std::vector<int>> distinct;
    for (const Point& q : nb) {
        CHECK(l1_distance(p, q) == 1);
        distinct.insert(std::vector<int>(q.begin(), q.end()));
    }
    CHECK(distinct.size() == 6);

    CHECK(neighbors(Point{0, 0}).size() == 4);
    CHECK(neighbors(Point{0, 0, 0, 0, 0}).size() == 10);
}

TEST_CASE("l1 distance is the graph metric") {
    CHECK(l1_distance(Point{0, 0}, Point{0, 0}) == 0);
    CHECK(l1_distance(Point{1, 2, 3}, Point{-1, 5, 3}) == 5);
    CHECK(l1_norm(Point{-7, 2}) == 9);
    CHECK_THROWS_AS(l1_distance(Point{0, 0}, Point{0, 0, 0}), DomainError);
}

TEST_CASE("point dimension cap") {
    CHECK_NOTHROW((Point{0, 0, 0, 0, 0, 0, 0, 0}));
    CHECK_THROWS_AS((Point{0, 0, 0, 0, 0, 0, 0, 0, 0}), DomainError);
}

TEST_CASE("radius-1 box in Z^3 has 27 interior and 54 boundary points") {
    LatticeBox box = LatticeBox::centered(3, 1);
    CHECK(box.interior_size() == 27);
    CHECK(box.boundary_size() == 54);
    CHECK(box.closure_size() == 81);

    auto oracle = brute_boundary(box_interior_set(box));
    REQUIRE(oracle.size() == 54);
    for (const Point& p : box.boundary())
        CHECK(oracle.count(std::vector<int>(p.begin(), p.end())) == 1);
}

TEST_CASE("box boundary matches enumeration on random boxes") {
    std::mt19937_64 rng(20260814u);
    for (int trial = 0; trial < 40; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        Point lo = Point::zero(dim), hi = Point::zero(dim);
        for (int i = 0; i < dim; ++i) {
            lo[i] = static_cast<int>(rng() % 7) - 3;
            hi[i] = lo[i] + static_cast<int>(rng() % 4);
        }
        LatticeBox box(lo, hi);

        auto interior = box_interior_set(box);
        auto oracle = brute_boundary(interior);
        REQUIRE(box.boundary_size() == static_cast<std::int64_t>(oracle.size()));
        for (const Point& p : box.boundary()) {
            CHECK(oracle.count(std::vector<int>(p.begin(), p.end())) == 1);
            CHECK(box.on_boundary(p));
            CHECK(!box.contains(p));
        }

        // General-set enumeration must agree as well.
        std::vector<Point> pts;
        for (std::int64_t i = 0; i < box.interior_size(); ++i) pts.push_back(box.interior_point(i));
        auto generic = boundary_of(pts);
        REQUIRE(generic.size() == oracle.size());
        for (const Point& p : generic) CHECK(box.on_boundary(p));
    }
}

TEST_CASE("boundary is lexicographically ordered and indexable") {
    LatticeBox box = LatticeBox::centered(2, 3);
    const auto& bdry = box.boundary();
    REQUIRE(!bdry.empty());
    for (std::size_t i = 1; i < bdry.size(); ++i) CHECK(bdry[i - 1] < bdry[i]);
    for (std::size_t i = 0; i < bdry.size(); ++i)
        CHECK(box.boundary_index(bdry[i]) == static_cast<std::int64_t>(i));
    CHECK_THROWS_AS(box.boundary_index(Point{0, 0}), DomainError);
    CHECK_THROWS_AS(box.boundary_index(Point{4, 4}), DomainError); // corner, not adjacent
}

TEST_CASE("interior indexing is a lexicographic bijection") {
    LatticeBox box(Point{-2, 0, 5}, Point{1, 2, 6});
    REQUIRE(box.interior_size() == 4 * 3 * 2);
    Point prev = box.interior_point(0);
    CHECK(prev == box.lo());
    for (std::int64_t i = 0; i < box.interior_size(); ++i) {
        Point p = box.interior_point(i);
        CHECK(box.interior_index(p) == i);
        if (i > 0) CHECK(prev < p);
        prev = p;
    }
    CHECK(box.interior_point(box.interior_size() - 1) == box.hi());
    CHECK_THROWS_AS(box.interior_index(Point{2, 0, 5}), DomainError);
}

TEST_CASE("closure indexing covers interior then boundary") {
    LatticeBox box = LatticeBox::centered(2, 2);
    std::set<std::int64_t> seen;
    for (std::int64_t i = 0; i < box.closure_size(); ++i) {
        Point p = box.closure_point(i);
        CHECK(box.closure_index(p) == i);
        seen.insert(i);
    }
    CHECK(static_cast<std::int64_t>(seen.size()) == box.closure_size());
}

TEST_CASE("corner points are not lattice boundary") {
    LatticeBox box = LatticeBox::centered(2, 1);
    CHECK(!box.on_boundary(Point{2, 2}));
    CHECK(box.on_boundary(Point{2, 0}));
    CHECK(box.on_boundary(Point{0, -2}));
    CHECK(!box.on_boundary(Point{3, 0}));
}

TEST_CASE("box interiors are connected, split sets are not") {
    LatticeBox box = LatticeBox::centered(3, 2);
    std::vector<Point> pts;
    for (std::int64_t i = 0; i < box.interior_size(); ++i) pts.push_back(box.interior_point(i));
    CHECK(is_connected(pts));

    std::vector<Point> split{Point{0, 0}, Point{0, 1}, Point{5, 5}};
    CHECK(!is_connected(split));
}

TEST_CASE("empty domain is rejected") {
    std::vector<Point> none;
    CHECK_THROWS_WITH(boundary_of(none), "empty domain");
}

TEST_CASE("degenerate and inverted boxes are rejected") {
    CHECK_THROWS_AS(LatticeBox(Point{1, 0}, Point{0, 0}), DomainError);
    CHECK_THROWS_AS(LatticeBox::centered(2, 0), DomainError);
    CHECK_NOTHROW(LatticeBox(Point{0, 0}, Point{0, 0})); // single vertex is fine
}

TEST_CASE("exhaustion radii must strictly increase") {
    CHECK_THROWS_AS(Exhaustion(2, Point::zero(2), {4, 4, 6}), DomainError);
    CHECK_THROWS_AS(Exhaustion(2, Point::zero(2), {}), DomainError);

    Exhaustion ex(2, Point{1, -1}, {2, 4, 7});
    REQUIRE(ex.size() == 3);
    for (int i = 1; i < ex.size(); ++i) {
        CHECK(ex.box(i)->strictly_contains(*ex.box(i - 1)));
        CHECK(!ex.box(i - 1)->strictly_contains(*ex.box(i)));
    }
    CHECK(!ex.box(0)->strictly_contains(*ex.box(0)));
}

TEST_CASE("translation moves boxes rigidly") {
    Point t{3, -2};
    LatticeBox a = LatticeBox::centered(2, 2);
    LatticeBox b = LatticeBox::centered(2, 2, t);
    REQUIRE(a.interior_size() == b.interior_size());
    for (std::int64_t i = 0; i < a.interior_size(); ++i)
        CHECK(a.interior_point(i) + t == b.interior_point(i));
    REQUIRE(a.boundary_size() == b.boundary_size());
    for (std::int64_t i = 0; i < a.boundary_size(); ++i)
        CHECK(a.boundary_point(i) + t == b.boundary_point(i));
}
