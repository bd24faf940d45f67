#include "cyclecap/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace cyclecap {

namespace {
void check(const CountTable& table, long n, long m) {
    if (n < 0 || n > table.max_n()) throw std::out_of_range("n outside table");
    if (m < 1) throw std::invalid_argument("cycle length must be >= 1");
}
}  // namespace

double expected_cycle_count(const CountTable& table, long n, long m) {
    check(table, n, m);
    if (m > table.alpha() || m > n) return 0.0;
    return std::exp(table.log_z(n - m) - table.log_z(n)) / static_cast<double>(m);
}

double falling_factorial_moment(const CountTable& table, long n, long m, int k) {
    check(table, n, m);
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    if (k == 0) return 1.0;
    if (m > table.alpha() || static_cast<long>(k) * m > n) return 0.0;
    return std::exp(table.log_z(n - k * m) - table.log_z(n) -
                    static_cast<double>(k) * std::log(static_cast<double>(m)));
}

double cycle_count_covariance(const CountTable& table, long n, long m1, long m2) {
    check(table, n, m1);
    check(table, n, m2);
    double e1 = expected_cycle_count(table, n, m1);
    double e2 = expected_cycle_count(table, n, m2);
    if (m1 == m2)
        return falling_factorial_moment(table, n, m1, 2) + e1 - e1 * e1;
    double joint = 0.0;
    if (m1 <= table.alpha() && m2 <= table.alpha() && m1 + m2 <= n)
        joint = std::exp(table.log_z(n - m1 - m2) - table.log_z(n)) /
                (static_cast<double>(m1) * static_cast<double>(m2));
    return joint - e1 * e2;
}

double expected_cumulative_count(const CountTable& table, long n, long b) {
    double s = 0.0;
    for (long m = 1; m <= b; ++m) s += expected_cycle_count(table, n, m);
    return s;
}

double cumulative_count_variance(const CountTable& table, long n, long b) {
    // Var(K_b) = sum E[C_m](1-E[C_m]) + sum_{m1 != m2} (joint - E E)
    // computed with the factorial-moment identities; O(b^2).
    double var = 0.0;
    std::vector<double> e(static_cast<std::size_t>(b) + 1, 0.0);
    for (long m = 1; m <= b; ++m) e[static_cast<std::size_t>(m)] = expected_cycle_count(table, n, m);
    for (long m1 = 1; m1 <= b; ++m1) {
        var += falling_factorial_moment(table, n, m1, 2) + e[static_cast<std::size_t>(m1)] -
               e[static_cast<std::size_t>(m1)] * e[static_cast<std::size_t>(m1)];
        for (long m2 = 1; m2 <= b; ++m2) {
            if (m2 == m1) continue;
            double joint = 0.0;
            if (m1 + m2 <= n && m1 <= table.alpha() && m2 <= table.alpha())
                joint = std::exp(table.log_z(n - m1 - m2) - table.log_z(n)) /
                        (static_cast<double>(m1) * static_cast<double>(m2));
            var += joint - e[static_cast<std::size_t>(m1)] * e[static_cast<std::size_t>(m2)];
        }
    }
    return var;
}

double cumulative_count_cross_covariance(const CountTable& table, long n, long b1, long b2) {
    double cov = 0.0;
    for (long m1 = 1; m1 <= b1; ++m1)
        for (long m2 = 1; m2 <= b2; ++m2)
            cov += cycle_count_covariance(table, n, m1, m2);
    return cov;
}

double expected_cumulative_size(const CountTable& table, long n, long b) {
    double s = 0.0;
    for (long m = 1; m <= b; ++m)
        s += static_cast<double>(m) * expected_cycle_count(table, n, m);
    return s;
}

double cumulative_size_variance(const CountTable& table, long n, long b) {
    double var = 0.0;
    std::vector<double> e(static_cast<std::size_t>(b) + 1, 0.0);
    for (long m = 1; m <= b; ++m) e[static_cast<std::size_t>(m)] = expected_cycle_count(table, n, m);
    for (long m1 = 1; m1 <= b; ++m1) {
        double d1 = static_cast<double>(m1);
        var += d1 * d1 *
               (falling_factorial_moment(table, n, m1, 2) + e[static_cast<std::size_t>(m1)] -
                e[static_cast<std::size_t>(m1)] * e[static_cast<std::size_t>(m1)]);
        for (long m2 = 1; m2 <= b; ++m2) {
            if (m2 == m1) continue;
            double joint = 0.0;
            if (m1 + m2 <= n && m1 <= table.alpha() && m2 <= table.alpha())
                joint = std::exp(table.log_z(n - m1 - m2) - table.log_z(n)) /
                        (static_cast<double>(m1) * static_cast<double>(m2));
            var += d1 * static_cast<double>(m2) *
                   (joint - e[static_cast<std::size_t>(m1)] * e[static_cast<std::size_t>(m2)]);
        }
    }
    return var;
}

std::vector<double> exact_marginal_pmf(long n, long alpha, long m, long j_max) {
    if (n < 0 || alpha < 1) throw std::invalid_argument("need n >= 0, alpha >= 1");
    if (alpha > n) alpha = std::max<long>(n, 1);
    if (m < 1 || m > alpha) throw std::invalid_argument("need 1 <= m <= alpha");
    // coefficients without length m, and the full normalizer
    WeightRow without_m = [&] {
        std::vector<double> q(static_cast<std::size_t>(alpha), 1.0);
        q[static_cast<std::size_t>(m - 1)] = 0.0;
        return WeightRow(std::move(q));
    }();
    std::vector<double> lc = log_coeff_weighted(without_m, n);
    CountTable table(alpha, n, CountMode::logspace);
    const double log_zn = table.log_z(n);
    const double log_m = std::log(static_cast<double>(m));
    long hard_cap = n / m;
    bool adaptive = j_max < 0;
    if (adaptive || j_max > hard_cap) j_max = hard_cap;
    std::vector<double> pmf;
    pmf.reserve(static_cast<std::size_t>(j_max) + 1);
    double mass = 0.0;
    for (long j = 0; j <= j_max; ++j) {
        double lp = -static_cast<double>(j) * log_m -
                    std::lgamma(static_cast<double>(j) + 1.0) +
                    lc[static_cast<std::size_t>(n - j * m)] - log_zn;
        double p = std::isfinite(lp) ? std::exp(lp) : 0.0;
        pmf.push_back(p);
        mass += p;
        if (adaptive && mass > 1.0 - 1e-12 && j >= 2) break;
    }
    return pmf;
}

}  // namespace cyclecap
