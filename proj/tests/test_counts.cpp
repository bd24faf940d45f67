#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "brute_force.hpp"
#include "cyclecap/counts.hpp"

using namespace cyclecap;

TEST_CASE("count_constrained: frozen small cases") {
    CHECK(count_constrained_exact(5, 2) == 26);  // brute-force derived
    CHECK(count_constrained_exact(4, 4) == 24);
    CHECK(count_constrained_exact(6, 1) == 1);
    CHECK(count_constrained_exact(0, 3) == 1);
    CHECK(count_constrained_exact(4, 2) == 10);
}

TEST_CASE("count_constrained equals brute-force enumeration for n <= 8") {
    for (int n = 0; n <= 8; ++n) {
        for (int alpha = 1; alpha <= std::max(n, 1); ++alpha) {
            long expected = brute::count_constrained(n, alpha);
            CHECK(count_constrained_exact(n, alpha) == expected);
            CHECK(count_constrained(n, alpha, CountMode::logspace).rel_diff(
                      LogReal::from_double(static_cast<double>(expected))) < 1e-10);
        }
    }
}

TEST_CASE("counts are monotone in alpha and capped by n!") {
    for (long n : {6L, 9L, 12L}) {
        BigCount prev = 0, factorial = 1;
        for (long i = 2; i <= n; ++i) factorial *= i;
        for (long alpha = 1; alpha <= n; ++alpha) {
            BigCount cur = count_constrained_exact(n, alpha);
            CHECK(cur >= prev);
            CHECK(cur <= factorial);
            prev = cur;
        }
        CHECK(prev == factorial);  // alpha = n is unconstrained
    }
}

TEST_CASE("z_norm basics") {
    CHECK(z_norm(5, 5).rel_diff(LogReal::one()) == 0.0);
    CHECK(z_norm(5, 2).rel_diff(LogReal::from_double(26.0 / 120.0)) < 1e-12);
    CHECK(z_norm(6, 1).rel_diff(LogReal::from_double(1.0 / 720.0)) < 1e-12);
    // exactly 1 iff alpha >= n
    CHECK(z_norm(7, 7).to_double() == 1.0);
    CHECK(z_norm(7, 6).to_double() < 1.0);
}

TEST_CASE("logspace table stays within 1e-10 of exact for a mixed grid") {
    for (long n : {30L, 80L, 150L}) {
        for (long alpha : {3L, 7L, n / 2, n}) {
            CountTable ex(alpha, n, CountMode::exact);
            CountTable ls(alpha, n, CountMode::logspace);
            CHECK(std::abs(ex.log_z(n) - ls.log_z(n)) < 1e-10 * std::abs(ex.log_z(n)) + 1e-12);
        }
    }
}

TEST_CASE("coeff_weighted reproduces z_norm for indicator weights") {
    for (long n : {5L, 9L, 14L}) {
        for (long alpha : {2L, 3L, n}) {
            LogReal a = coeff_weighted(n, WeightRow::unit(alpha));
            LogReal b = z_norm(n, alpha);
            CHECK(a.rel_diff(b) < 1e-10);
        }
    }
}

TEST_CASE("coeff_weighted frozen examples") {
    // [z^3] exp(z + z^2/2 + z^3/3) = 1
    CHECK(coeff_weighted(3, WeightRow::unit(3)).rel_diff(LogReal::one()) < 1e-13);
    // [z^4] with weights 1 on {1,2}: 10/24
    CHECK(coeff_weighted(4, WeightRow::unit(2)).rel_diff(LogReal::from_double(10.0 / 24.0)) <
          1e-13);
    // [z^2] exp(e^s z) = e^{2s}/2 at s = 0.7
    double s = 0.7;
    LogReal got = coeff_weighted(2, WeightRow::from_map({{1, std::exp(s)}}));
    CHECK(got.rel_diff(LogReal::from_double(std::exp(2 * s) / 2.0)) < 1e-13);
    // odd coefficients vanish when only even lengths carry weight
    CHECK(coeff_weighted(5, WeightRow::from_map({{2, 1.0}})).is_zero());
    CHECK_THROWS(WeightRow({1.0, -0.5}));
}

TEST_CASE("poisson_sum_pmf frozen examples and normalization") {
    double h3 = 1.0 + 0.5 + 1.0 / 3.0;
    CHECK(poisson_sum_pmf(0, 0, 3) == doctest::Approx(std::exp(-h3)).epsilon(1e-13));
    CHECK(poisson_sum_pmf(1, 0, 3) == doctest::Approx(std::exp(-h3)).epsilon(1e-13));
    CHECK(poisson_sum_pmf(1, 1, 3) == 0.0);
    // direct convolution of Poisson(1), Poisson(1/2), Poisson(1/3) at k = 4:
    // sum over a + 2b + 3c = 4 of e^{-h3} 1^a/a! (1/2)^b/b! (1/3)^c/c!
    double direct = 0.0;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; 2 * b + a <= 4; ++b) {
            int rem = 4 - a - 2 * b;
            if (rem % 3 != 0) continue;
            int c = rem / 3;
            direct += std::exp(-h3) * std::pow(1.0, a) / std::tgamma(a + 1.0) *
                      std::pow(0.5, b) / std::tgamma(b + 1.0) * std::pow(1.0 / 3.0, c) /
                      std::tgamma(c + 1.0);
        }
    CHECK(poisson_sum_pmf(4, 0, 3) == doctest::Approx(direct).epsilon(1e-12));

    auto pmf = poisson_sum_pmf_table(400, 2, 9);
    double total = 0.0;
    for (double p : pmf) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exact_prefix_law matches brute force on S_n") {
    for (auto [n, alpha, b] : {std::tuple<int, int, int>{3, 3, 1}, {4, 2, 2}, {6, 3, 2},
                               {7, 4, 3}, {8, 3, 2}}) {
        auto oracle = brute::prefix_counts(n, alpha, b);
        long total = brute::count_constrained(n, alpha);
        PrefixLaw law = exact_prefix_law(n, alpha, b);
        CHECK(law.probabilities.size() == oracle.size());
        for (auto& [key, cnt] : oracle) {
            auto it = law.probabilities.find(key);
            REQUIRE(it != law.probabilities.end());
            CHECK(it->second ==
                  doctest::Approx(static_cast<double>(cnt) / static_cast<double>(total))
                      .epsilon(1e-12));
        }
        CHECK(law.total() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exact_prefix_law frozen spec cases") {
    PrefixLaw law = exact_prefix_law(3, 3, 1);
    CHECK(law.probabilities.at({3}) == doctest::Approx(1.0 / 6.0));
    CHECK(law.probabilities.at({1}) == doctest::Approx(3.0 / 6.0));
    CHECK(law.probabilities.at({0}) == doctest::Approx(2.0 / 6.0));

    PrefixLaw degenerate = exact_prefix_law(2, 1, 1);
    CHECK(degenerate.probabilities.at({2}) == doctest::Approx(1.0));
    CHECK(degenerate.probabilities.size() == 1);

    PrefixLaw involutions = exact_prefix_law(4, 2, 2);
    CHECK(involutions.probabilities.at({0, 2}) == doctest::Approx(3.0 / 10.0));
}

TEST_CASE("prefix lattice obeys the cell cap") {
    CHECK_THROWS_AS(exact_prefix_law(40, 20, 6, 100), std::length_error);
}

TEST_CASE("tv_exact: two-point law against hand computation") {
    // S_{2,1} = {identity}: C_1 = 2 always. TV(delta_2, Poisson(1)) = 1 - e^{-1}/2
    CHECK(tv_exact(2, 1, 1) == doctest::Approx(1.0 - std::exp(-1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("tv_exact is a TV distance: within [0,1] and shrinking with alpha = n") {
    for (auto [n, alpha, b] : {std::tuple<long, long, long>{6, 3, 2}, {8, 8, 1}, {9, 4, 2}}) {
        double tv = tv_exact(n, alpha, b);
        CHECK(tv >= 0.0);
        CHECK(tv <= 1.0);
    }
    // unconstrained case approaches zero as n grows, for fixed b
    double prev = 1.0;
    for (long n : {4L, 8L, 16L, 32L}) {
        double tv = tv_exact(n, n, 1);
        CHECK(tv < prev);
        prev = tv;
    }
}

TEST_CASE("count table caches round trip") {
    namespace fs = std::filesystem;
    for (CountMode mode : {CountMode::exact, CountMode::logspace}) {
        CountTable t(4, 60, mode);
        fs::path p = fs::temp_directory_path() / CountTable::cache_name(4, 60, mode);
        t.save(p.string());
        CountTable back = CountTable::load(p.string());
        CHECK(back.alpha() == 4);
        CHECK(back.max_n() == 60);
        CHECK(back.mode() == mode);
        CHECK(back.log_z(60) == t.log_z(60));
        if (mode == CountMode::exact) CHECK(back.exact_count(60) == t.exact_count(60));
        fs::remove(p);
    }
}

TEST_CASE("degenerate inputs") {
    CHECK(count_constrained_exact(0, 1) == 1);
    CHECK(count_constrained_exact(3, 10) == 6);  // alpha >= n is alpha = n
    CHECK_THROWS(count_constrained(-1, 2));
    CHECK_THROWS(count_constrained(4, 0));
}
