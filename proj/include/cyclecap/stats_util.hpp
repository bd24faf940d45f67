#pragma once

#include <span>
#include <vector>

namespace cyclecap {

double normal_cdf(double z);

/// Regularized upper incomplete gamma Q(a, x); series for x < a+1,
/// continued fraction otherwise.
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with df degrees of freedom.
double chi2_sf(double x, double df);

/// One-sample Kolmogorov-Smirnov distance of the values against the
/// standard normal cdf. The input need not be sorted.
double ks_distance_normal(std::vector<double> values);

struct Chi2Result {
    double statistic = 0.0;
    long df = 0;
    double p_value = 1.0;
    long merged_cells = 0;  // low-expectation cells pooled into one bucket
};

/// Pearson goodness-of-fit of observed counts against expected counts
/// (same length, expected sums to the observed total). Cells with expected
/// count < min_expected are pooled.
Chi2Result pearson_chi2(std::span<const long> observed, std::span<const double> expected,
                        double min_expected = 5.0);

/// Two-sample homogeneity chi-square over matched cells.
Chi2Result two_sample_chi2(std::span<const long> counts_a, std::span<const long> counts_b,
                           double min_expected = 5.0);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased
double covariance(std::span<const double> a, std::span<const double> b);
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace cyclecap
