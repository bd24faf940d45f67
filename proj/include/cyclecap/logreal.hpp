#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace cyclecap {

/// A nonnegative real stored as its natural logarithm, so that quantities
/// like x^n ~ e^{thousands} survive arithmetic without overflow.
/// sign is +1 for positive values and 0 for an exact zero (log_magnitude
/// is -inf in that case).
struct LogReal {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static LogReal zero() { return LogReal{}; }
    static LogReal one() { return LogReal{0.0, 1}; }
    static LogReal from_log(double lm) { return LogReal{lm, 1}; }
    static LogReal from_double(double v);

    bool is_zero() const { return sign == 0; }
    double to_double() const { return sign == 0 ? 0.0 : std::exp(log_magnitude); }

    LogReal operator*(const LogReal& o) const;
    LogReal operator/(const LogReal& o) const;
    LogReal operator+(const LogReal& o) const;

    bool operator<(const LogReal& o) const;
    bool operator==(const LogReal& o) const {
        return sign == o.sign && (sign == 0 || log_magnitude == o.log_magnitude);
    }

    /// |this/other - 1|, +inf if other is zero and this is not.
    double rel_diff(const LogReal& o) const;
};

/// log(sum_i exp(v[i])) with a running max shift; -inf for an empty span.
double log_sum_exp(std::span<const double> v);

/// Compensated (Kahan) summation.
double kahan_sum(std::span<const double> v);

/// Deterministic pairwise summation; result independent of thread schedule
/// as long as the input order is fixed.
double pairwise_sum(std::span<const double> v);

}  // namespace cyclecap
