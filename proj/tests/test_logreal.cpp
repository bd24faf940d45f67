#include <doctest.h>

#include <cmath>
#include <vector>

#include "cyclecap/logreal.hpp"

using namespace cyclecap;

TEST_CASE("LogReal round trip and arithmetic") {
    LogReal a = LogReal::from_double(2.5);
    LogReal b = LogReal::from_double(4.0);
    CHECK((a * b).to_double() == doctest::Approx(10.0).epsilon(1e-14));
    CHECK((b / a).to_double() == doctest::Approx(1.6).epsilon(1e-14));
    CHECK((a + b).to_double() == doctest::Approx(6.5).epsilon(1e-14));
    CHECK(a < b);
}

TEST_CASE("LogReal zero handling") {
    LogReal z = LogReal::zero();
    LogReal a = LogReal::from_double(3.0);
    CHECK(z.is_zero());
    CHECK((z * a).is_zero());
    CHECK((z + a).to_double() == doctest::Approx(3.0));
    CHECK(z.to_double() == 0.0);
    CHECK(LogReal::from_double(0.0).is_zero());
    CHECK_THROWS(a / z);
    CHECK_THROWS(LogReal::from_double(-1.0));
}

TEST_CASE("LogReal survives huge magnitudes") {
    LogReal big = LogReal::from_log(5000.0);   // e^5000, not a double
    LogReal bigger = big * big;
    CHECK(bigger.log_magnitude == doctest::Approx(10000.0));
    CHECK((bigger / big).rel_diff(big) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("log_sum_exp matches direct sums and handles spread inputs") {
    std::vector<double> v{0.1, -2.0, 1.4};
    double direct = std::log(std::exp(0.1) + std::exp(-2.0) + std::exp(1.4));
    CHECK(log_sum_exp(v) == doctest::Approx(direct).epsilon(1e-14));
    std::vector<double> spread{-1000.0, 0.0, -1000.0};
    CHECK(log_sum_exp(spread) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::isinf(log_sum_exp(std::vector<double>{})));
}

TEST_CASE("pairwise and kahan sums agree with exact rationals") {
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(kahan_sum(v) == doctest::Approx(100.0).epsilon(1e-15));
}
