#include "cyclecap/stats_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cyclecap/logreal.hpp"

namespace cyclecap {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

namespace {

// lower regularized incomplete gamma by power series
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// upper regularized incomplete gamma by modified Lentz continued fraction
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q needs a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double ks_distance_normal(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("no samples");
    std::sort(values.begin(), values.end());
    const double inv_n = 1.0 / static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double f = normal_cdf(values[i]);
        d = std::max(d, f - static_cast<double>(i) * inv_n);
        d = std::max(d, static_cast<double>(i + 1) * inv_n - f);
    }
    return d;
}

namespace {

Chi2Result chi2_from_cells(const std::vector<double>& obs, const std::vector<double>& exp_,
                           long extra_df_loss) {
    Chi2Result r;
    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        double diff = obs[i] - exp_[i];
        stat += diff * diff / exp_[i];
    }
    r.statistic = stat;
    r.df = static_cast<long>(obs.size()) - 1 - extra_df_loss;
    r.p_value = r.df >= 1 ? chi2_sf(stat, static_cast<double>(r.df)) : 1.0;
    return r;
}

}  // namespace

Chi2Result pearson_chi2(std::span<const long> observed, std::span<const double> expected,
                        double min_expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("mismatched chi-square inputs");
    std::vector<double> obs, exp_;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    long merged = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < min_expected) {
            pooled_obs += static_cast<double>(observed[i]);
            pooled_exp += expected[i];
            ++merged;
        } else {
            obs.push_back(static_cast<double>(observed[i]));
            exp_.push_back(expected[i]);
        }
    }
    if (pooled_exp > 0.0) {
        obs.push_back(pooled_obs);
        exp_.push_back(pooled_exp);
    }
    if (obs.size() < 2) throw std::invalid_argument("chi-square needs >= 2 effective cells");
    Chi2Result r = chi2_from_cells(obs, exp_, 0);
    r.merged_cells = merged;
    return r;
}

Chi2Result two_sample_chi2(std::span<const long> counts_a, std::span<const long> counts_b,
                           double min_expected) {
    if (counts_a.size() != counts_b.size() || counts_a.empty())
        throw std::invalid_argument("mismatched chi-square inputs");
    double na = 0.0, nb = 0.0;
    for (long c : counts_a) na += static_cast<double>(c);
    for (long c : counts_b) nb += static_cast<double>(c);
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("empty sample");
    // pool cells whose pooled expectation is small, then compare each sample
    // against the pooled proportions
    std::vector<double> obs, exp_;
    double pa_obs = 0.0, pa_exp = 0.0, pb_obs = 0.0, pb_exp = 0.0;
    long merged = 0;
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        double tot = static_cast<double>(counts_a[i] + counts_b[i]);
        double ea = na * tot / (na + nb);
        double eb = nb * tot / (na + nb);
        if (ea < min_expected || eb < min_expected) {
            pa_obs += static_cast<double>(counts_a[i]);
            pb_obs += static_cast<double>(counts_b[i]);
            pa_exp += ea;
            pb_exp += eb;
            ++merged;
        } else {
            obs.push_back(static_cast<double>(counts_a[i]));
            exp_.push_back(ea);
            obs.push_back(static_cast<double>(counts_b[i]));
            exp_.push_back(eb);
        }
    }
    long cells = static_cast<long>(obs.size()) / 2;
    if (pa_exp + pb_exp > 0.0) {
        obs.push_back(pa_obs);
        exp_.push_back(pa_exp);
        obs.push_back(pb_obs);
        exp_.push_back(pb_exp);
        ++cells;
    }
    if (cells < 2) throw std::invalid_argument("chi-square needs >= 2 effective cells");
    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        double diff = obs[i] - exp_[i];
        if (exp_[i] > 0.0) stat += diff * diff / exp_[i];
    }
    Chi2Result r;
    r.statistic = stat;
    r.df = cells - 1;
    r.p_value = r.df >= 1 ? chi2_sf(stat, static_cast<double>(r.df)) : 1.0;
    r.merged_cells = merged;
    return r;
}

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("no samples");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("variance needs >= 2 samples");
    double m = mean(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

double covariance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("bad covariance input");
    double ma = mean(a), mb = mean(b);
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
    return pairwise_sum(prod) / static_cast<double>(a.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b) {
    return covariance(a, b) / std::sqrt(variance(a) * variance(b));
}

}  // namespace cyclecap
