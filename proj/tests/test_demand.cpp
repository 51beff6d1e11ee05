#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

using namespace lpgame;
using testutil::rel_close;

TEST_CASE("linear demand evaluates base plus gamma times liquidity") {
    CHECK(demand_value(DemandCurve::linear(100, 0), 50) == doctest::Approx(100.0));
    CHECK(demand_value(DemandCurve::linear(100, 1), 50) == doctest::Approx(150.0));
    // base-plus-liquidity decomposition is exact at V = 0
    CHECK(demand_value(DemandCurve::linear(123.5, 0.7), 0.0) == 123.5);
}

TEST_CASE("logarithmic demand evaluates base plus log(gamma V)") {
    CHECK(demand_value(DemandCurve::logarithmic(10, 1), 1) == doctest::Approx(10.0));
    CHECK(demand_value(DemandCurve::logarithmic(2, 3), 5) == doctest::Approx(2 + std::log(15.0)));
    // may be negative for tiny V; callers restrict the domain
    CHECK(demand_value(DemandCurve::logarithmic(1, 1), 1e-6) < 0.0);
}

TEST_CASE("demand slopes") {
    CHECK(demand_slope(DemandCurve::linear(100, 0.01), 7.0) == 0.01);
    CHECK(demand_slope(DemandCurve::linear(100, 0.01), 1e8) == 0.01);
    CHECK(demand_slope(DemandCurve::logarithmic(10, 1), 2.0) == doctest::Approx(0.5));
    CHECK(demand_slope(DemandCurve::logarithmic(10, 1), 4.0) == doctest::Approx(0.25));
}

TEST_CASE("domain errors") {
    const DemandCurve log_curve = DemandCurve::logarithmic(10, 1);
    CHECK_THROWS_AS(demand_value(log_curve, 0.0), std::domain_error);
    CHECK_THROWS_AS(demand_value(log_curve, -1.0), std::domain_error);
    CHECK_THROWS_AS(demand_slope(log_curve, 0.0), std::domain_error);
    CHECK_THROWS_AS(demand_value(DemandCurve::linear(1, 1), -0.5), std::domain_error);

    DemandCurve zero_gamma = DemandCurve::logarithmic(10, 0);
    CHECK_THROWS_AS(demand_value(zero_gamma, 1.0), std::domain_error);
    CHECK_THROWS_AS(zero_gamma.min_liquidity(), std::domain_error);

    CHECK_THROWS_AS(DemandCurve::linear(-1, 0), std::invalid_argument);
    CHECK_THROWS_AS(DemandCurve::logarithmic(1, -2), std::invalid_argument);
}

TEST_CASE("min_liquidity marks the nonnegative-volume boundary") {
    CHECK(DemandCurve::linear(5, 1).min_liquidity() == 0.0);
    const DemandCurve curve = DemandCurve::logarithmic(3, 0.5);
    const double v_min = curve.min_liquidity();
    CHECK(v_min == doctest::Approx(std::exp(-3.0) / 0.5));
    CHECK(demand_value(curve, v_min) == doctest::Approx(0.0));
    CHECK(demand_value(curve, 2 * v_min) > 0.0);
}

TEST_CASE("demand is nondecreasing in liquidity") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double base = unit(rng) * 100.0;
        const double gamma = 0.01 + unit(rng);
        const DemandCurve curve = (i % 2 == 0) ? DemandCurve::linear(base, gamma)
                                               : DemandCurve::logarithmic(base, gamma);
        const double v1 = std::pow(10.0, -3.0 + 12.0 * unit(rng));
        const double v2 = v1 * (1.0 + unit(rng));
        CHECK(demand_value(curve, v2) >= demand_value(curve, v1));
    }
}

TEST_CASE("slope matches central finite differences on a log-spaced grid") {
    const DemandCurve curves[] = {DemandCurve::linear(100, 0.037),
                                  DemandCurve::linear(5, 0),
                                  DemandCurve::logarithmic(10, 1),
                                  DemandCurve::logarithmic(0, 2.5)};
    for (const DemandCurve& curve : curves) {
        for (int i = 0; i <= 48; ++i) {
            const double v = std::pow(10.0, -3.0 + 12.0 * i / 48.0);  // [1e-3, 1e9]
            const double h = 1e-6 * v;
            const double fd = testutil::central_diff(
                [&](double x) { return demand_value(curve, x); }, v, h);
            CHECK(rel_close(demand_slope(curve, v), fd, 1e-6, 1e-300));
        }
    }
}
