#include <doctest.h>

#include <cmath>

#include "cyclecap/asymptotics.hpp"
#include "cyclecap/counts.hpp"

using namespace cyclecap;

TEST_CASE("theta_n closed forms") {
    CHECK(theta_n(1, 1) == doctest::Approx(1.0));
    CHECK(theta_n(1 << 12, 1 << 12) == doctest::Approx(std::pow(2.0, -12.0)).epsilon(1e-12));
    // lambda_2 theta_n^2 ~ (n/alpha)^{1/6} for unit weights
    for (auto [n, alpha] : {std::pair<long, long>{10000, 100}, {100000, 316}}) {
        LambdaMoments lm = lambda_moments(solve_saddle(n, alpha));
        double t = theta_n(n, alpha);
        double lhs = lm[2] * t * t;
        double rhs = std::pow(static_cast<double>(n) / alpha, 1.0 / 6.0);
        CHECK(lhs / rhs > 0.3);
        CHECK(lhs / rhs < 3.0);
    }
}

TEST_CASE("fnorm: closed forms per descriptor") {
    SaddlePoint sp = solve_saddle(400, 20);
    double tn = theta_n(400, 20);
    CHECK(fnorm(FunctionSpec::one(), sp).value() == 0.0);
    // monomial: exactly theta_n * m / x, and the grid sup agrees
    for (long m : {1L, 5L, 20L}) {
        FNorm f = fnorm(FunctionSpec::monomial(m), sp);
        double expected = tn * static_cast<double>(m) / sp.x;
        CHECK(f.bound == doctest::Approx(expected).epsilon(1e-12));
        CHECK(f.grid == doctest::Approx(expected).epsilon(1e-12));
    }
    // exp partial sum: bound sum_{j<b} x^j <= b x^b, grid below bound
    for (long b : {2L, 8L}) {
        FNorm f = fnorm(FunctionSpec::exp_partial_sum(b), sp);
        CHECK(f.grid <= f.bound * (1 + 1e-12));
        CHECK(f.bound <= tn * static_cast<double>(b) * std::pow(sp.x, static_cast<double>(b)));
    }
    // exp linear with s = 0 degenerates to the constant function
    FNorm trivial = fnorm(FunctionSpec::exp_linear({{0.0, 3}}), sp);
    CHECK(trivial.bound == 0.0);
    FNorm live = fnorm(FunctionSpec::exp_linear({{0.3, 3}, {-0.2, 7}}), sp);
    CHECK(live.grid <= live.bound * (1 + 1e-12));
    CHECK(live.bound > 0.0);
}

TEST_CASE("coeff_estimate: components reproduce the value") {
    CoeffEstimate est = coeff_estimate(FunctionSpec::one(), WeightRow::unit(14), 200);
    double recomputed = est.log_f_at_x + est.lambda0 - 200.0 * std::log(est.x) -
                        0.5 * std::log(2.0 * M_PI * est.lambda2);
    CHECK(est.value.log_magnitude == doctest::Approx(recomputed).epsilon(1e-12));
    CHECK(est.claimed_rel_error == doctest::Approx(14.0 / 200.0).epsilon(1e-12));
}

TEST_CASE("coeff_estimate: scale covariance in the prefactor") {
    // the estimate is linear in f: the f(x) factor transfers verbatim
    long n = 150, alpha = 12, m = 5;
    CoeffEstimate a = coeff_estimate(FunctionSpec::monomial(m), WeightRow::unit(alpha), n);
    CoeffEstimate b =
        coeff_estimate(FunctionSpec::exp_linear({{0.8, m}}), WeightRow::unit(alpha), n);
    double expected_ratio = b.log_f_at_x - a.log_f_at_x;
    CHECK(b.value.log_magnitude - a.value.log_magnitude ==
          doctest::Approx(expected_ratio).epsilon(1e-12));
}

TEST_CASE("coeff_estimate of Z_{n,alpha}: accuracy against the exact table") {
    // alpha = sqrt(n): relative error below the claimed alpha/n scale and
    // decreasing along the grid
    double prev = 1.0;
    for (long n : {100L, 400L, 1600L}) {
        long alpha = static_cast<long>(std::sqrt(static_cast<double>(n)));
        CoeffEstimate est = coeff_estimate(FunctionSpec::one(), WeightRow::unit(alpha), n);
        CountTable table(alpha, n, CountMode::exact);
        double rel = est.value.rel_diff(table.z(n));
        CHECK(rel < est.claimed_rel_error);
        CHECK(rel < prev);
        prev = rel;
    }
    // (n=200, alpha=14): within 25 percent of exact
    CoeffEstimate est = coeff_estimate(FunctionSpec::one(), WeightRow::unit(14), 200);
    CountTable table(14, 200, CountMode::exact);
    CHECK(est.value.rel_diff(table.z(200)) < 0.25);
}

TEST_CASE("estimate over exact-Z reproduces E[C_m] ~ mu_m") {
    long n = 400, alpha = 20, m = 17;
    CoeffEstimate num = coeff_estimate(FunctionSpec::monomial(m), WeightRow::unit(alpha), n);
    CountTable table(alpha, n, CountMode::exact);
    double ratio = std::exp(num.value.log_magnitude - table.z(n).log_magnitude);
    double exact_mean = std::exp(table.log_z(n - m) - table.log_z(n)) / static_cast<double>(m);
    CHECK(ratio == doctest::Approx(exact_mean).epsilon(0.15));
    CHECK(ratio == doctest::Approx(mu(n, alpha, m)).epsilon(0.15));
}

TEST_CASE("quadrature: unconstrained coefficient is exactly one") {
    QuadratureResult q = coeff_quadrature(FunctionSpec::one(), WeightRow::unit(50), 50);
    CHECK(q.converged);
    CHECK(q.value.rel_diff(LogReal::one()) < 1e-10);
    CHECK(q.imag_ratio < 1e-10);
}

TEST_CASE("quadrature matches exact coefficients to 1e-8") {
    for (auto [n, alpha] : {std::pair<long, long>{20, 5}, {120, 11}, {300, 17}, {300, 120}}) {
        CountTable table(alpha, n, CountMode::exact);
        QuadratureResult q = coeff_quadrature(FunctionSpec::one(), WeightRow::unit(alpha), n);
        INFO("n=", n, " alpha=", alpha, " nodes=", q.nodes);
        CHECK(q.converged);
        CHECK(q.value.rel_diff(table.z(n)) < 1e-8);
        CHECK(q.imag_ratio < 1e-10);
    }
}

TEST_CASE("quadrature with a monomial prefactor matches the shifted coefficient") {
    // [z^n] (z^m/m) e^{...} = c_{n-m}/m
    long n = 60, alpha = 7, m = 9;
    CountTable table(alpha, n, CountMode::exact);
    QuadratureResult q = coeff_quadrature(FunctionSpec::monomial(m), WeightRow::unit(alpha), n);
    LogReal expected = table.z(n - m) / LogReal::from_double(static_cast<double>(m));
    CHECK(q.value.rel_diff(expected) < 1e-8);
}

TEST_CASE("oracle chain: quadrature and estimate against the exact value") {
    for (auto [n, alpha] : {std::pair<long, long>{64, 8}, {256, 16}}) {
        CountTable table(alpha, n, CountMode::exact);
        LogReal exact = table.z(n);
        QuadratureResult q = coeff_quadrature(FunctionSpec::one(), WeightRow::unit(alpha), n);
        CoeffEstimate e = coeff_estimate(FunctionSpec::one(), WeightRow::unit(alpha), n);
        CHECK(q.value.rel_diff(exact) < 1e-8);
        CHECK(e.value.rel_diff(exact) < 4.0 * e.claimed_rel_error);
    }
}

TEST_CASE("estimate for the weighted tail equation") {
    // weights 1 on (b, alpha]: the coefficient driving the tail-sum laws
    long n = 200, alpha = 20, b = 3;
    WeightRow tail = WeightRow::indicator_range(b + 1, alpha);
    CoeffEstimate est = coeff_estimate(FunctionSpec::one(), tail, n);
    auto lc = log_coeff_weighted(tail, n);
    CHECK(std::abs(std::expm1(est.value.log_magnitude - lc[static_cast<std::size_t>(n)])) <
          4.0 * est.claimed_rel_error);
}
