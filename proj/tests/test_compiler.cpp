#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "tropinit/compiler.hpp"
#include "tropinit/io.hpp"
#include "tropinit/network.hpp"

using namespace tropinit;

namespace {

ConvexComponent unit_square() { return polygon_facets({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

ConvexComponent shifted_square(double dx) {
    return polygon_facets({{dx, 0}, {dx + 1, 0}, {dx + 1, 1}, {dx, 1}});
}

}  // namespace

TEST_CASE("gate band algebra: halfwidth, sharpness, and their inversion") {
    CHECK(band_halfwidth(30.0, 0.1) == doctest::Approx(std::log(9.0) / 30.0).epsilon(1e-12));
    CHECK(sharpness_for(0.05, 0.01) == doctest::Approx(20.0 * std::log(99.0)).epsilon(1e-12));
    CHECK(sharpness_for(0.3, 0.5) == 0.0);  // even odds ask for no sharpness at all

    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
        const double kappa = rng.uniform(1.0, 200.0);
        const double eta = rng.uniform(1e-6, 0.5);
        const double w = band_halfwidth(kappa, eta);
        CHECK(logistic(kappa * w) == doctest::Approx(1.0 - eta).epsilon(1e-12));
        CHECK(logistic(-kappa * w) == doctest::Approx(eta).epsilon(1e-12));
        if (w > 0.0)
            CHECK(sharpness_for(w, eta) == doctest::Approx(kappa).epsilon(1e-12));
    }

    CHECK_THROWS_AS(band_halfwidth(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(band_halfwidth(10.0, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(sharpness_for(-0.1, 0.1), std::invalid_argument);
}

TEST_CASE("margin parameter defaults sit at half the guarantee bounds") {
    auto p = margin_params(24, 120);
    CHECK(p.eta == doctest::Approx(1.0 / 192.0));
    CHECK(p.delta == doctest::Approx(1.0 / 960.0));
    CHECK(p.lambda == doctest::Approx(4.0 * std::log(959.0)));
    CHECK(p.kappa == 0.0);

    auto q = margin_params(1, 1);
    CHECK(q.lambda == doctest::Approx(4.0 * std::log(7.0)));

    for (int M : {1, 3, 24, 200}) CHECK(M * margin_params(M, 5).eta < 0.5);
    CHECK_THROWS_AS(margin_params(0, 1), std::invalid_argument);
}

TEST_CASE("convex compilation of the unit square") {
    auto spec = compile_convex(unit_square(), 30.0);
    REQUIRE(spec.layers.size() == 1);
    CHECK(spec.layers[0].W.rows == 4);
    CHECK(spec.layers[0].W.cols == 2);
    CHECK(spec.head.tau == doctest::Approx(3.5));
    CHECK(spec.head.alpha == 1.0);
    CHECK(spec.provenance.kind == "convex");

    // gate sum scores: nearly m deep inside, one dead gate past a facet
    const auto center = forward(spec, {0.5, 0.5});
    CHECK(center.logit + 3.5 == doctest::Approx(4.0).epsilon(1e-4));
    CHECK(center.prob > 0.5);
    const auto outside = forward(spec, {2.0, 0.5});
    CHECK(outside.logit + 3.5 == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(outside.prob < 0.5);

    CHECK_THROWS_AS(compile_convex(unit_square(), 0.0), std::invalid_argument);
    ConvexComponent bad = unit_square();
    bad.facets[0].u = {0.0, -2.0};
    CHECK_THROWS_AS(compile_convex(bad, 30.0), std::invalid_argument);
    ConvexComponent open = unit_square();
    open.bounded = false;
    CHECK_THROWS_AS(compile_convex(open, 30.0), std::invalid_argument);
}

TEST_CASE("convex compilation classifies margin-separated points correctly") {
    Rng rng(7);
    const double kappa = 40.0, eta = 0.05;
    const double w = band_halfwidth(kappa, eta);
    for (int t = 0; t < 10; ++t) {
        const int m = 3 + int(rng.index(6));
        auto verts = oracles::random_convex_polygon(rng, m, {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                                    rng.uniform(0.8, 1.6));
        auto comp = polygon_facets(verts);
        auto spec = compile_convex(comp, kappa);
        int tested = 0;
        for (int s = 0; s < 200; ++s) {
            const std::vector<double> p{rng.uniform(-4, 4), rng.uniform(-4, 4)};
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& f : comp.facets)
                worst = std::max(worst, f.u[0] * p[0] + f.u[1] * p[1] - f.h);
            if (std::abs(worst) <= w) continue;  // inside the uncertainty band
            const bool inside = worst < 0.0;
            CHECK((forward(spec, p).prob > 0.5) == inside);
            ++tested;
        }
        CHECK(tested > 50);
    }
}

TEST_CASE("union compilation: structure, decisions, and the lambda floor") {
    GateParams params;
    params.kappa = 40.0;
    params.lambda = 0.0;  // ask for the floor
    params.eta = 1.0 / 32.0;
    params.delta = 1.0 / 16.0;
    auto spec = compile_union({unit_square(), shifted_square(2.0)}, params);
    REQUIRE(spec.layers.size() == 2);
    CHECK(spec.layers[0].W.rows == 8);
    CHECK(spec.layers[1].W.rows == 2);
    CHECK(spec.layers[1].W.cols == 8);
    CHECK(spec.layers[1].b[0] == doctest::Approx(-3.5));
    CHECK(spec.layers[1].k == doctest::Approx(4.0 * std::log(15.0)));
    CHECK(spec.provenance.lambda == doctest::Approx(4.0 * std::log(15.0)));
    CHECK(spec.head.tau == doctest::Approx(0.5));
    CHECK(spec.warnings.empty());

    CHECK(forward(spec, {0.5, 0.5}).prob > 0.5);
    CHECK(forward(spec, {2.5, 0.5}).prob > 0.5);
    CHECK(forward(spec, {1.5, 0.5}).prob < 0.5);
    CHECK(forward(spec, {-1.0, -1.0}).prob < 0.5);

    // an explicit lambda above the floor is kept as given
    params.lambda = 30.0;
    auto sharp = compile_union({unit_square()}, params);
    CHECK(sharp.layers[1].k == doctest::Approx(30.0));

    params.kappa = 0.0;
    CHECK_THROWS_AS(compile_union({unit_square()}, params), std::invalid_argument);
}

TEST_CASE("union compilation warns when tolerances break the guarantee bounds") {
    GateParams loose;
    loose.kappa = 40.0;
    loose.eta = 0.3;    // >= 1/(4M) with M = 4, and M*eta = 1.2 >= 1/2
    loose.delta = 0.3;  // > 1/(4R) with R = 2
    auto spec = compile_union({unit_square(), shifted_square(2.0)}, loose);
    CHECK(spec.warnings.size() == 3);

    auto clean = margin_params(4, 2);
    clean.kappa = 40.0;
    CHECK(compile_union({unit_square(), shifted_square(2.0)}, clean).warnings.empty());
}

TEST_CASE("union decisions honor the facet margins on random unions") {
    Rng rng(19);
    GateParams params = margin_params(8, 3);
    params.kappa = 50.0;
    const double w = band_halfwidth(params.kappa, params.eta);
    for (int t = 0; t < 6; ++t) {
        std::vector<ConvexComponent> comps;
        const int R = 2 + int(rng.index(2));
        for (int r = 0; r < R; ++r) {
            auto verts = oracles::random_convex_polygon(
                rng, 3 + int(rng.index(6)), {rng.uniform(-2, 2), rng.uniform(-2, 2)},
                rng.uniform(0.5, 1.0));
            comps.push_back(polygon_facets(verts));
        }
        auto spec = compile_union(comps, params);
        for (int s = 0; s < 300; ++s) {
            const std::vector<double> p{rng.uniform(-3.5, 3.5), rng.uniform(-3.5, 3.5)};
            bool inside_any = false, near_any = false;
            for (const auto& comp : comps) {
                double worst = -std::numeric_limits<double>::infinity();
                for (const auto& f : comp.facets)
                    worst = std::max(worst, f.u[0] * p[0] + f.u[1] * p[1] - f.h);
                if (worst < -w) inside_any = true;
                if (std::abs(worst) <= w) near_any = true;
            }
            if (near_any) continue;
            CHECK((forward(spec, p).prob > 0.5) == inside_any);
        }
    }
}

TEST_CASE("ball cover compilation sizes facets from the tolerance") {
    BallCover cover;
    cover.dim = 2;
    cover.balls = {{{0.0, 0.0}, 1.0}, {{3.0, 0.0}, 1.0}};
    GateParams params;
    params.kappa = 20.0;
    params.eta = 1.0 / 16.0;
    params.delta = 1.0 / 16.0;
    auto spec = compile_ball_cover(cover, 0.42, params);
    CHECK(spec.provenance.kind == "cover");
    CHECK(spec.provenance.sides == std::vector<int>{4, 4});
    CHECK(spec.provenance.balls.size() == 2);
    REQUIRE(spec.layers.size() == 2);
    CHECK(spec.layers[0].W.rows == 8);
    CHECK(spec.layers[1].W.rows == 2);

    CHECK(forward(spec, {0.0, 0.0}).prob > 0.5);
    CHECK(forward(spec, {3.0, 0.0}).prob > 0.5);
    CHECK(forward(spec, {1.5, 0.0}).prob < 0.5);
    CHECK(forward(spec, {1.5, 1.5}).prob < 0.5);

    // a tighter polytope tolerance buys more facets per ball
    auto fine = compile_ball_cover(cover, 0.01, params);
    CHECK(fine.provenance.sides[0] == 23);

    CHECK_THROWS_AS(compile_ball_cover(BallCover{}, 0.42, params), std::invalid_argument);
    CHECK_THROWS_AS(compile_ball_cover(cover, 0.0, params), std::invalid_argument);
}

TEST_CASE("one-dimensional least squares over sigmoid and relu bases") {
    std::vector<double> xs, cs;
    for (int i = 0; i <= 400; ++i) xs.push_back(-2.0 + 4.0 * i / 400.0);

    SUBCASE("a constant target is matched exactly by the bias column") {
        std::vector<double> ys(xs.size(), 0.7);
        auto res = ls_initializer_1d(xs, ys, {0.0}, 20.0);
        REQUIRE(res.ok);
        for (double x : {-1.5, 0.0, 1.3})
            CHECK(forward(res.spec, {x}).logit + 0.5 == doctest::Approx(0.7).epsilon(1e-9));
    }

    SUBCASE("a step target is a single steep sigmoid") {
        std::vector<double> ys;
        for (double x : xs) ys.push_back(x > 0.0 ? 1.0 : 0.0);
        auto res = ls_initializer_1d(xs, ys, {0.0}, 120.0);
        REQUIRE(res.ok);
        for (double x : xs) {
            if (std::abs(x) <= 0.05) continue;
            const double pred = forward(res.spec, {x}).logit + 0.5;
            CHECK(std::abs(pred - (x > 0.0 ? 1.0 : 0.0)) <= 0.01);
        }
    }

    SUBCASE("a rectangle target is a sigmoid difference with unit weights") {
        std::vector<double> ys;
        for (double x : xs) ys.push_back(std::abs(x) <= 1.0 ? 1.0 : 0.0);
        auto res = ls_initializer_1d(xs, ys, {-1.0, 1.0}, 120.0);
        REQUIRE(res.ok);
        REQUIRE(res.alpha.size() == 3);
        CHECK(res.alpha[0] == doctest::Approx(1.0).epsilon(0.02));
        CHECK(res.alpha[1] == doctest::Approx(-1.0).epsilon(0.02));
        CHECK(res.alpha[2] == doctest::Approx(0.0).epsilon(0.02));
        CHECK(forward(res.spec, {0.0}).prob > 0.5);
        CHECK(forward(res.spec, {1.8}).prob < 0.5);
        CHECK(forward(res.spec, {-1.8}).prob < 0.5);
    }

    SUBCASE("a tent target lies in the relu span and fits to rounding error") {
        std::vector<double> ys;
        for (double x : xs) {
            double y = 0.0;
            if (x > -1.0 && x <= 0.5) y = (x + 1.0) * (2.0 / 3.0);
            if (x > 0.5 && x < 1.0) y = (1.0 - x) * 2.0;
            ys.push_back(y);
        }
        auto res = ls_initializer_1d(xs, ys, {-1.0, 0.5, 1.0}, 1.0, Basis1d::relu);
        REQUIRE(res.ok);
        for (double x : {-1.5, -0.2, 0.5, 0.7, 1.6})
            CHECK(forward(res.spec, {x}).logit + 0.5 ==
                  doctest::Approx(x > -1.0 && x <= 0.5   ? (x + 1.0) * 2.0 / 3.0
                                  : x > 0.5 && x < 1.0 ? (1.0 - x) * 2.0
                                                       : 0.0)
                      .epsilon(1e-6));
    }

    SUBCASE("the normal-equation solution is a local SSE minimum") {
        std::vector<double> ys;
        for (double x : xs) ys.push_back(std::sin(1.7 * x));
        auto res = ls_initializer_1d(xs, ys, {-1.0, 0.0, 1.0}, 5.0);
        REQUIRE(res.ok);
        auto sse = [&](const std::vector<double>& alpha) {
            double s = 0.0;
            for (size_t i = 0; i < xs.size(); ++i) {
                double pred = alpha[3];
                for (int j = 0; j < 3; ++j)
                    pred += alpha[j] * logistic(5.0 * (xs[i] - std::vector<double>{-1, 0, 1}[j]));
                s += (pred - ys[i]) * (pred - ys[i]);
            }
            return s;
        };
        const double best = sse(res.alpha);
        Rng rng(31);
        for (int t = 0; t < 10; ++t) {
            auto alt = res.alpha;
            for (auto& a : alt) a += rng.uniform(-0.05, 0.05);
            CHECK(sse(alt) >= best - 1e-9);
        }
    }

    SUBCASE("duplicate centers survive through the ridge ladder") {
        std::vector<double> ys;
        for (double x : xs) ys.push_back(x > 0.0 ? 1.0 : 0.0);
        auto res = ls_initializer_1d(xs, ys, {0.0, 0.0}, 120.0);
        CHECK(res.ok);
        CHECK(forward(res.spec, {1.0}).logit + 0.5 == doctest::Approx(1.0).epsilon(0.05));
    }

    SUBCASE("poisoned input is reported, not solved") {
        std::vector<double> bad = xs;
        bad[5] = std::nan("");
        std::vector<double> ys(xs.size(), 0.0);
        auto res = ls_initializer_1d(bad, ys, {0.0}, 20.0);
        CHECK_FALSE(res.ok);
    }

    CHECK_THROWS_AS(ls_initializer_1d({0.0, 1.0}, {0.0, 1.0}, {0.0, 0.5}, 10.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ls_initializer_1d(xs, std::vector<double>(3, 0.0), {0.0}, 10.0),
                    std::invalid_argument);
}

TEST_CASE("spec serialization round-trips weights bit for bit") {
    GateParams params = margin_params(4, 2);
    params.kappa = 35.0;
    auto spec = compile_union({unit_square(), shifted_square(2.0)}, params);
    spec.warnings.push_back("synthetic note");
    const auto j = spec_to_json(spec);
    const auto back = spec_from_json(nlohmann::json::parse(j.dump()));

    REQUIRE(back.layers.size() == spec.layers.size());
    for (size_t l = 0; l < spec.layers.size(); ++l) {
        CHECK(back.layers[l].W.rows == spec.layers[l].W.rows);
        CHECK(back.layers[l].W.cols == spec.layers[l].W.cols);
        CHECK(std::memcmp(back.layers[l].W.a.data(), spec.layers[l].W.a.data(),
                          spec.layers[l].W.a.size() * sizeof(double)) == 0);
        CHECK(back.layers[l].b == spec.layers[l].b);
        CHECK(back.layers[l].act == spec.layers[l].act);
        CHECK(back.layers[l].k == spec.layers[l].k);
    }
    CHECK(back.head.tau == spec.head.tau);
    CHECK(back.head.alpha == spec.head.alpha);
    CHECK(back.provenance.kind == "union");
    CHECK(back.provenance.components.size() == 2);
    CHECK(back.provenance.lambda == spec.provenance.lambda);
    CHECK(back.warnings == spec.warnings);

    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const std::vector<double> p{rng.uniform(-2, 4), rng.uniform(-2, 2)};
        CHECK(forward(back, p).logit == forward(spec, p).logit);
    }
}
