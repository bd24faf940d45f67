#include "cyclecap/logreal.hpp"

#include <algorithm>
#include <stdexcept>

namespace cyclecap {

LogReal LogReal::from_double(double v) {
    if (v < 0.0) throw std::invalid_argument("LogReal holds nonnegative reals only");
    if (v == 0.0) return zero();
    return LogReal{std::log(v), 1};
}

LogReal LogReal::operator*(const LogReal& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return LogReal{log_magnitude + o.log_magnitude, 1};
}

LogReal LogReal::operator/(const LogReal& o) const {
    if (o.sign == 0) throw std::domain_error("LogReal division by zero");
    if (sign == 0) return zero();
    return LogReal{log_magnitude - o.log_magnitude, 1};
}

LogReal LogReal::operator+(const LogReal& o) const {
    if (sign == 0) return o;
    if (o.sign == 0) return *this;
    double hi = std::max(log_magnitude, o.log_magnitude);
    double lo = std::min(log_magnitude, o.log_magnitude);
    return LogReal{hi + std::log1p(std::exp(lo - hi)), 1};
}

bool LogReal::operator<(const LogReal& o) const {
    if (sign == 0) return o.sign != 0;
    if (o.sign == 0) return false;
    return log_magnitude < o.log_magnitude;
}

double LogReal::rel_diff(const LogReal& o) const {
    if (o.sign == 0) return sign == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (sign == 0) return 1.0;
    return std::abs(std::expm1(log_magnitude - o.log_magnitude));
}

double log_sum_exp(std::span<const double> v) {
    double m = -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (double t : v) {
        if (t == -std::numeric_limits<double>::infinity()) continue;
        if (t <= m) {
            s += std::exp(t - m);
        } else {
            s = s * std::exp(m - t) + 1.0;
            m = t;
        }
    }
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    return m + std::log(s);
}

double kahan_sum(std::span<const double> v) {
    double s = 0.0, c = 0.0;
    for (double t : v) {
        double y = t - c;
        double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double t : v) s += t;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace cyclecap
