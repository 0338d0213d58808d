#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tropinit/tropical.hpp"

using namespace tropinit;

namespace {

TropicalPolynomial line0() { return oracles::trop_line(0.0, 0.0); }

bool has_vertex(const TropicalCurve& c, double x, double y) {
    for (const auto& v : c.vertices)
        if (std::abs(v.pos.x - x) < 1e-7 && std::abs(v.pos.y - y) < 1e-7) return true;
    return false;
}

}  // namespace

TEST_CASE("constructor sorts, merges duplicates max-plus, validates") {
    TropicalPolynomial f(2, {{{1, 0}, 0.0}, {{0, 0}, -1.0}, {{1, 0}, 2.0}});
    REQUIRE(f.size() == 2);
    CHECK(f.monomials()[0].u == std::vector<int>{0, 0});
    CHECK(f.monomials()[1].u == std::vector<int>{1, 0});
    CHECK(f.monomials()[1].c == 2.0);  // larger coefficient wins the merge

    CHECK_THROWS_AS(TropicalPolynomial(2, {}), std::invalid_argument);
    CHECK_THROWS_AS(TropicalPolynomial(0, {{{0}, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(TropicalPolynomial(2, {{{1}, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(TropicalPolynomial(2, {{{0, 0}, std::nan("")}}), std::invalid_argument);
}

TEST_CASE("evaluation of the three-term line and a quotient") {
    auto f = line0();
    CHECK(trop_eval(f, {2.0, 1.0}) == doctest::Approx(2.0));
    CHECK(trop_eval(f, {-3.0, -5.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(trop_eval(f, {1.0}), std::invalid_argument);

    TropicalPolynomial u(2, {{{0, 0}, 0.0}, {{1, 0}, 0.0}, {{0, 1}, 0.0}});
    TropicalPolynomial v(2, {{{1, 1}, 0.0}});
    CHECK(trop_rational_eval(u, v, {1.0, 1.0}) == doctest::Approx(-1.0));
    CHECK(trop_rational_eval(u, u, {0.3, -1.7}) == 0.0);
}

TEST_CASE("max-plus product is pointwise sum, exactly") {
    Rng rng(11);
    auto a = oracles::trop_line(0.4, -0.2);
    auto b = oracles::trop_line(-1.1, 0.9);
    auto p = oracles::trop_product(a, b);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(trop_eval(p, x) == doctest::Approx(trop_eval(a, x) + trop_eval(b, x)).epsilon(1e-12));
    }
}

TEST_CASE("evaluation is convex") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        std::vector<Monomial> ms;
        const int m = 3 + int(rng.index(6));
        for (int i = 0; i < m; ++i)
            ms.push_back({{int(rng.index(4)), int(rng.index(4))}, rng.uniform(-2, 2)});
        TropicalPolynomial f(2, std::move(ms));
        for (int s = 0; s < 10; ++s) {
            std::vector<double> a{rng.uniform(-5, 5), rng.uniform(-5, 5)};
            std::vector<double> b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
            std::vector<double> mid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
            CHECK(trop_eval(f, mid) <= (trop_eval(f, a) + trop_eval(f, b)) / 2 + 1e-9);
        }
    }
}

TEST_CASE("hypersurface membership at and off tie points") {
    auto f = line0();
    CHECK(on_hypersurface(f, {0.0, 0.0}));
    CHECK(on_hypersurface(f, {0.5, 0.5}));   // x = y wins over 0
    CHECK(on_hypersurface(f, {0.0, -4.0}));  // x ties the constant
    CHECK_FALSE(on_hypersurface(f, {2.0, 1.0}));
    CHECK(on_hypersurface(f, {1e-10, -1.0}, 1e-9));
    CHECK_FALSE(on_hypersurface(f, {1e-10, -1.0}, 1e-12));
}

TEST_CASE("newton polytope of products of lines and of a lone monomial") {
    auto f0 = line0();
    auto n0 = newton_polytope(f0);
    REQUIRE(n0.size() == 3);
    CHECK(n0[0] == std::vector<int>{0, 0});

    auto f2 = oracles::trop_product(oracles::trop_product(line0(), oracles::trop_line(1, -1)),
                                    oracles::trop_line(-1, 1));
    auto n2 = newton_polytope(f2);
    REQUIRE(n2.size() == 3);
    std::set<std::vector<int>> got(n2.begin(), n2.end());
    CHECK(got.count({0, 0}));
    CHECK(got.count({3, 0}));
    CHECK(got.count({0, 3}));

    TropicalPolynomial mono(2, {{{2, 0}, 0.0}});
    auto nm = newton_polytope(mono);
    REQUIRE(nm.size() == 1);
    CHECK(nm[0] == std::vector<int>{2, 0});
}

TEST_CASE("single line: curve and dual counts") {
    auto f = line0();
    auto c = trop_curve(f);
    CHECK(c.vertices.size() == 1);
    CHECK(has_vertex(c, 0, 0));
    CHECK(c.edges.size() == 0);
    CHECK(c.rays.size() == 3);
    CHECK(c.regions == 3);
    CHECK_FALSE(c.degenerate);

    auto rep = duality_report(f, Box{}, 96);
    CHECK(rep.cells == 1);
    CHECK(rep.interior_edges == 0);
    CHECK(rep.boundary_edges == 3);
    CHECK(rep.used_points == 3);
    CHECK(rep.counts_match());
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.all_vertices_in_window);
}

TEST_CASE("product of two lines: crossing vertex and mixed subdivision") {
    auto f = oracles::trop_product(line0(), oracles::trop_line(1, -1));
    REQUIRE(f.size() == 6);
    CHECK(trop_eval(f, {0.0, 0.0}) == doctest::Approx(1.0));

    auto c = trop_curve(f);
    CHECK(c.vertices.size() == 3);
    CHECK(has_vertex(c, 0, 0));
    CHECK(has_vertex(c, 1, -1));
    CHECK(has_vertex(c, 0, -1));  // the two lines cross here
    CHECK(c.edges.size() == 2);
    CHECK(c.rays.size() == 6);
    CHECK(c.regions == 6);

    auto sub = dual_subdivision(f);
    REQUIRE(sub.cells.size() == 3);
    int squares = 0, triangles = 0;
    for (const auto& cell : sub.cells) {
        if (cell.size() == 4) ++squares;
        if (cell.size() == 3) ++triangles;
    }
    CHECK(squares == 1);  // dual to the crossing
    CHECK(triangles == 2);

    auto rep = duality_report(f, Box{}, 96);
    CHECK(rep.counts_match());
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.curve_edges == 2);
    CHECK(rep.curve_rays == 6);
    CHECK(rep.used_points == 6);
}

TEST_CASE("product of three lines: full correspondence table") {
    auto f = oracles::trop_product(oracles::trop_product(line0(), oracles::trop_line(1, -1)),
                                   oracles::trop_line(-1, 1));
    REQUIRE(f.size() == 10);

    auto c = trop_curve(f);
    CHECK(c.vertices.size() == 6);
    CHECK(has_vertex(c, 0, -1));
    CHECK(has_vertex(c, -1, 0));
    CHECK(has_vertex(c, -1, -1));
    CHECK(c.edges.size() == 6);
    CHECK(c.rays.size() == 9);
    CHECK(c.regions == 10);

    auto rep = duality_report(f, Box{}, 96);
    CHECK(rep.cells == 6);
    CHECK(rep.interior_edges == 6);
    CHECK(rep.boundary_edges == 9);
    CHECK(rep.used_points == 10);
    CHECK(rep.counts_match());
    CHECK_FALSE(rep.degenerate);
}

TEST_CASE("cell areas of the dual subdivision partition the newton polygon") {
    Rng rng(29);
    int checked = 0;
    for (int t = 0; t < 40 && checked < 20; ++t) {
        std::vector<Monomial> ms;
        const int m = 4 + int(rng.index(5));
        std::set<std::vector<int>> seen;
        for (int i = 0; i < m; ++i) {
            std::vector<int> u{int(rng.index(4)), int(rng.index(4))};
            if (!seen.insert(u).second) continue;
            ms.push_back({u, rng.uniform(-1, 1)});
        }
        if (ms.size() < 4) continue;
        TropicalPolynomial f(2, std::move(ms));
        auto sub = dual_subdivision(f);
        if (sub.degenerate) continue;
        long long total = 0;
        for (const auto& cell : sub.cells) total += oracles::doubled_area(cell);
        CHECK(total == oracles::doubled_area(sub.newton));
        ++checked;
    }
    CHECK(checked >= 15);
}

TEST_CASE("duality counts match on random full-dimensional supports") {
    Rng rng(41);
    int checked = 0;
    for (int t = 0; t < 60 && checked < 25; ++t) {
        std::vector<Monomial> ms;
        const int m = 3 + int(rng.index(6));
        std::set<std::vector<int>> seen;
        for (int i = 0; i < m; ++i) {
            std::vector<int> u{int(rng.index(4)), int(rng.index(4))};
            if (!seen.insert(u).second) continue;
            ms.push_back({u, rng.uniform(-1.5, 1.5)});
        }
        if (ms.size() < 3) continue;
        TropicalPolynomial f(2, std::move(ms));
        auto rep = duality_report(f, Box{-6, 6, -6, 6}, 96);
        if (rep.degenerate) continue;  // collinear support or razor ties: skip
        CHECK(rep.counts_match());
        ++checked;
    }
    CHECK(checked >= 15);
}

TEST_CASE("degenerate supports are flagged, not crashed") {
    SUBCASE("single monomial") {
        TropicalPolynomial f(2, {{{2, 0}, 0.0}});
        auto c = trop_curve(f);
        CHECK(c.vertices.empty());
        CHECK(c.rays.empty());
        CHECK(c.regions == 1);
        auto sub = dual_subdivision(f);
        CHECK(sub.degenerate);
        CHECK(sub.cells.size() == 1);
        CHECK(sub.used_points == 1);
        auto rep = duality_report(f, Box{}, 96);
        CHECK(rep.degenerate);
        CHECK(rep.cells == 0);  // no 2-cells exist for a point support
    }
    SUBCASE("collinear support splits the plane with a full line") {
        TropicalPolynomial f(2, {{{0, 0}, 0.0}, {{1, 0}, 0.0}, {{2, 0}, 1.0}});
        auto c = trop_curve(f);
        CHECK(c.vertices.empty());
        CHECK(c.edges.empty());
        CHECK(c.rays.empty());
        CHECK(c.full_lines == 1);  // the tie locus x = -1/2
        CHECK(c.regions == 2);
        CHECK(on_hypersurface(f, {-0.5, 3.0}));
        auto sub = dual_subdivision(f);
        CHECK(sub.degenerate);
        CHECK(sub.used_points == 2);  // the middle exponent never wins
        auto rep = duality_report(f, Box{}, 96);
        CHECK(rep.degenerate);
    }
}

TEST_CASE("planar-only entry points reject other dimensions") {
    TropicalPolynomial f3(3, {{{0, 0, 0}, 0.0}, {{1, 0, 0}, 0.0}});
    CHECK_THROWS_AS(trop_curve(f3), std::invalid_argument);
    CHECK_THROWS_AS(dual_subdivision(f3), std::invalid_argument);
    CHECK_THROWS_AS(duality_report(f3, Box{}, 96), std::invalid_argument);
    CHECK_THROWS_AS(duality_report(line0(), Box{}, 32), std::invalid_argument);
}
