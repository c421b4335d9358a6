#include "reclab/hazard.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace reclab;

TEST_CASE("parse_model handles the grammar") {
    const HazardModel shifted = parse_model("exp:c=2,lf=1");
    CHECK(shifted.family() == Family::Exponential);
    CHECK(shifted.scale() == 2.0);
    CHECK(shifted.left_endpoint() == 1.0);

    const HazardModel plain = parse_model("exp:c=1");
    CHECK(plain.left_endpoint() == 0.0);

    const HazardModel wh = parse_model("weibull:alpha=0.5,c=1");
    CHECK(wh.family() == Family::Weibull);
    CHECK(wh.is_weibull_half());

    CHECK(parse_model("linquad").family() == Family::LinearQuadratic);

    CHECK_THROWS_AS(parse_model("exp:c=0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("weibull:alpha=-1,c=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("exp:lf=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("gamma:c=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("exp:c=abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model(""), std::invalid_argument);
}

TEST_CASE("cumulative hazard matches the family formulas") {
    CHECK(HazardModel::exponential(2.0, 1.0).hazard(2.0) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(HazardModel::weibull(0.5, 1.0).hazard(4.0) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(HazardModel::linear_quadratic().hazard(2.0) == Catch::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("hazard rate matches the family derivatives") {
    CHECK(HazardModel::exponential(3.0).rate(7.0) == Catch::Approx(3.0).epsilon(1e-14));
    CHECK(HazardModel::weibull(0.5, 1.0).rate(4.0) == Catch::Approx(0.25).epsilon(1e-14));
    CHECK(HazardModel::linear_quadratic().rate(2.0) == Catch::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("inverse hazard matches the closed forms") {
    CHECK(HazardModel::exponential(1.0).inverse(3.0) == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(HazardModel::weibull(0.5, 1.0).inverse(2.0) == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(HazardModel::linear_quadratic().inverse(6.0) == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("domain errors outside the support") {
    const HazardModel m = HazardModel::exponential(2.0, 1.0);
    CHECK_THROWS_AS(m.hazard(1.0), std::domain_error);
    CHECK_THROWS_AS(m.rate(0.5), std::domain_error);
    CHECK_THROWS_AS(m.inverse(0.0), std::domain_error);
    CHECK_THROWS_AS(m.inverse(-1.0), std::domain_error);
}

TEST_CASE("round trip H(H^-1(y)) over log-spaced y") {
    const HazardModel models[] = {HazardModel::exponential(2.0, 1.0),
                                  HazardModel::weibull(0.5, 1.0),
                                  HazardModel::weibull(2.0, 0.5),
                                  HazardModel::linear_quadratic()};
    for (const HazardModel& m : models) {
        for (int i = 0; i < 100; ++i) {
            const double y = std::pow(10.0, -6.0 + 9.0 * i / 99.0);
            const double back = m.hazard(m.inverse(y));
            CHECK(std::abs(back - y) <= 1e-10 * std::max(1.0, y));
        }
    }
}

TEST_CASE("monotonicity and cdf validity on sampled points") {
    const HazardModel models[] = {HazardModel::exponential(0.5, 1.0),
                                  HazardModel::weibull(0.5, 2.0),
                                  HazardModel::linear_quadratic()};
    for (const HazardModel& m : models) {
        double prev_h = -1.0, prev_f = -0.1;
        for (int i = 0; i <= 200; ++i) {
            const double x = m.left_endpoint() + 1e-3 + i * 0.5;
            const double h = m.hazard(x);
            const double f = m.cdf(x);
            CHECK(h > prev_h);
            CHECK(f >= prev_f);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            CHECK(m.rate(x) > 0.0);
            prev_h = h;
            prev_f = f;
        }
        CHECK(m.cdf(m.left_endpoint()) == 0.0);
    }
}

TEST_CASE("spec strings parse back to the same model") {
    const HazardModel models[] = {HazardModel::exponential(0.5, 1.0),
                                  HazardModel::weibull(0.5, 2.0),
                                  HazardModel::linear_quadratic()};
    for (const HazardModel& m : models) {
        const HazardModel back = parse_model(m.spec_string());
        CHECK(back.family() == m.family());
        CHECK(back.scale() == m.scale());
        CHECK(back.left_endpoint() == m.left_endpoint());
    }
}
