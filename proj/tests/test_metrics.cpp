#include <cmath>

#include "doctest.h"
#include "tropinit/common.hpp"
#include "tropinit/metrics.hpp"

using namespace tropinit;

TEST_CASE("brier score: worked values and the calibration optimum") {
    CHECK(brier({0.8, 0.3}, {1.0, 0.0}) == doctest::Approx(0.065).epsilon(1e-12));
    CHECK(brier({0.5, 0.5, 0.5}, {1.0, 0.0, 1.0}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(brier({1.0, 0.0}, {1.0, 0.0}) == 0.0);

    // among constant predictors the label mean is optimal
    const std::vector<double> y{1, 0, 0, 1, 1, 0, 1, 1};
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= double(y.size());
    auto at = [&](double c) { return brier(std::vector<double>(y.size(), c), y); };
    CHECK(at(mean) < at(mean + 0.05));
    CHECK(at(mean) < at(mean - 0.05));

    CHECK_THROWS_AS(brier({1.2}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(brier({0.5}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(brier({0.5, 0.5}, {1.0}), std::invalid_argument);
}

TEST_CASE("auc: worked values, ties, and ranking invariances") {
    auto a = auc({0.9, 0.4, 0.6}, {1.0, 0.0, 0.0});
    REQUIRE(a.has_value());
    CHECK(*a == 1.0);

    auto flat = auc({0.5, 0.5, 0.5, 0.5}, {1.0, 0.0, 1.0, 0.0});
    REQUIRE(flat.has_value());
    CHECK(*flat == 0.5);

    auto half_tie = auc({0.3, 0.3, 0.1}, {1.0, 0.0, 0.0});
    REQUIRE(half_tie.has_value());
    CHECK(*half_tie == doctest::Approx(0.75));  // one win, one exact tie

    CHECK_FALSE(auc({0.2, 0.8}, {1.0, 1.0}).has_value());
    CHECK_FALSE(auc({0.2, 0.8}, {0.0, 0.0}).has_value());

    Rng rng(9);
    std::vector<double> s, y;
    for (int i = 0; i < 200; ++i) {
        s.push_back(rng.uniform(-3.0, 3.0));  // scores need no unit range
        y.push_back(rng.uniform01() < 0.4 ? 1.0 : 0.0);
    }
    auto base = auc(s, y);
    REQUIRE(base.has_value());
    std::vector<double> warped;
    for (double v : s) warped.push_back(1.7 * v + 0.3);
    CHECK(*auc(warped, y) == *base);  // rank statistics ignore monotone maps

    std::vector<double> neg;
    for (double v : s) neg.push_back(-v);
    CHECK(*auc(neg, y) + *base == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("iou: worked values, threshold inclusivity, and the empty case") {
    auto three_one_one = iou({0.9, 0.9, 0.9, 0.9, 0.1}, {1, 1, 1, 0, 1}, 0.5);
    REQUIRE(three_one_one.has_value());
    CHECK(*three_one_one == doctest::Approx(0.6));

    CHECK(*iou({0.9, 0.1}, {1, 0}, 0.5) == 1.0);
    CHECK(*iou({0.1}, {1.0}, 0.5) == 0.0);
    CHECK(*iou({0.5}, {1.0}, 0.5) == 1.0);  // the threshold itself is predicted positive
    CHECK_FALSE(iou({0.1, 0.2}, {0, 0}, 0.5).has_value());
    CHECK_THROWS_AS(iou({0.5}, {1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(iou({0.5}, {1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("metric reports bundle counts and optional fields") {
    auto rep = metrics_report({0.8, 0.3}, {1.0, 0.0}, 0.5);
    CHECK(rep.brier == doctest::Approx(0.065));
    REQUIRE(rep.auc.has_value());
    CHECK(*rep.auc == 1.0);
    REQUIRE(rep.iou.has_value());
    CHECK(*rep.iou == 1.0);
    CHECK(rep.n_pos == 1);
    CHECK(rep.n_neg == 1);
    CHECK(rep.tau == 0.5);

    auto single = metrics_report({0.8, 0.7}, {1.0, 1.0}, 0.5);
    CHECK_FALSE(single.auc.has_value());
    CHECK(single.n_pos == 2);
    CHECK(single.n_neg == 0);
}

TEST_CASE("long-format CSV rows render six decimals and undefined markers") {
    MetricsReport rep;
    rep.brier = 0.065;
    rep.auc = 1.0;
    rep.iou = 0.6;
    CHECK(metrics_csv_row("single", 16, "ours", "init", rep) ==
          "single,16,ours,init,0.065000,1.000000,0.600000");

    MetricsReport bare;
    bare.brier = 0.25;
    CHECK(metrics_csv_row("double", 32, "xavier", "final", bare) ==
          "double,32,xavier,final,0.250000,undefined,undefined");
}
