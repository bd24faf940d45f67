#include "cyclecap/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cyclecap {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

FunctionSpec FunctionSpec::one() { return FunctionSpec{}; }

FunctionSpec FunctionSpec::monomial(long m) {
    if (m < 1) throw std::invalid_argument("monomial degree must be >= 1");
    FunctionSpec f;
    f.kind_ = Kind::monomial;
    f.m_ = m;
    return f;
}

FunctionSpec FunctionSpec::exp_linear(std::vector<std::pair<double, long>> s_and_m) {
    FunctionSpec f;
    f.kind_ = Kind::exp_linear;
    for (auto& [s, m] : s_and_m)
        if (m < 1) throw std::invalid_argument("exp_linear degrees must be >= 1");
    f.terms_ = std::move(s_and_m);
    return f;
}

FunctionSpec FunctionSpec::exp_partial_sum(long b) {
    if (b < 1) throw std::invalid_argument("partial sum bound must be >= 1");
    FunctionSpec f;
    f.kind_ = Kind::exp_partial_sum;
    f.b_ = b;
    return f;
}

std::complex<double> FunctionSpec::log_eval(std::complex<double> z) const {
    switch (kind_) {
        case Kind::one:
            return {0.0, 0.0};
        case Kind::monomial:
            return static_cast<double>(m_) * std::log(z) - std::log(static_cast<double>(m_));
        case Kind::exp_linear: {
            std::complex<double> acc = 0.0;
            for (auto& [s, m] : terms_)
                acc += std::expm1(s) * std::pow(z, static_cast<double>(m)) /
                       static_cast<double>(m);
            return acc;
        }
        case Kind::exp_partial_sum: {
            std::complex<double> acc = 0.0, zp = 1.0;
            for (long j = 1; j <= b_; ++j) {
                zp *= z;
                acc += (zp - 1.0) / static_cast<double>(j);
            }
            return acc;
        }
    }
    return {0.0, 0.0};
}

std::complex<double> FunctionSpec::dlog_eval(std::complex<double> z) const {
    switch (kind_) {
        case Kind::one:
            return {0.0, 0.0};
        case Kind::monomial:
            return static_cast<double>(m_) / z;
        case Kind::exp_linear: {
            std::complex<double> acc = 0.0;
            for (auto& [s, m] : terms_)
                acc += std::expm1(s) * std::pow(z, static_cast<double>(m - 1));
            return acc;
        }
        case Kind::exp_partial_sum: {
            std::complex<double> acc = 0.0, zp = 1.0;
            for (long j = 0; j < b_; ++j) {
                acc += zp;
                zp *= z;
            }
            return acc;
        }
    }
    return {0.0, 0.0};
}

double FunctionSpec::log_at_real(double x) const { return log_eval({x, 0.0}).real(); }

double FunctionSpec::deriv_sup_bound(double x) const {
    switch (kind_) {
        case Kind::one:
            return 0.0;
        case Kind::monomial:
            // |f'(x e^{i theta})| = x^{m-1} everywhere on the circle; f(x) = x^m/m
            return static_cast<double>(m_) / x;
        case Kind::exp_linear: {
            // |f(z)| <= f(x) * exp(2 sum (1-e^{s})_+ x^m / m) on the circle
            double deriv = 0.0, inflate = 0.0;
            for (auto& [s, m] : terms_) {
                deriv += std::abs(std::expm1(s)) * std::pow(x, static_cast<double>(m - 1));
                inflate += 2.0 * std::max(0.0, -std::expm1(s)) *
                           std::pow(x, static_cast<double>(m)) / static_cast<double>(m);
            }
            return deriv * std::exp(inflate);
        }
        case Kind::exp_partial_sum: {
            // |f(z)| <= f(x) on the circle (Re z^j <= x^j), |f'/f| <= sum_{j<b} x^j
            double s = 0.0, xp = 1.0;
            for (long j = 0; j < b_; ++j) {
                s += xp;
                xp *= x;
            }
            return s;
        }
    }
    return 0.0;
}

std::string FunctionSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::one: os << "one"; break;
        case Kind::monomial: os << "monomial:m=" << m_; break;
        case Kind::exp_linear: {
            os << "exp-linear:";
            for (auto& [s, m] : terms_) os << "(" << s << "," << m << ")";
            break;
        }
        case Kind::exp_partial_sum: os << "exp-partial-sum:b=" << b_; break;
    }
    return os.str();
}

double theta_n(long n, long alpha) {
    if (n < 1 || alpha < 1) throw std::invalid_argument("need n, alpha >= 1");
    return std::exp(-(5.0 * std::log(static_cast<double>(n)) +
                      7.0 * std::log(static_cast<double>(alpha))) /
                    12.0);
}

FNorm fnorm(const FunctionSpec& f, const SaddlePoint& sp) {
    const double tn = theta_n(sp.n, sp.alpha);
    const double x = sp.x;
    const double log_fx = f.log_at_real(x);
    double grid_sup = 0.0;
    constexpr int kGridPoints = 33;
    for (int i = 0; i < kGridPoints; ++i) {
        double th = -tn + 2.0 * tn * static_cast<double>(i) / (kGridPoints - 1);
        std::complex<double> z = std::polar(x, th);
        double val = std::abs(f.dlog_eval(z)) * std::exp(f.log_eval(z).real() - log_fx);
        grid_sup = std::max(grid_sup, val);
    }
    return FNorm{tn * grid_sup, tn * f.deriv_sup_bound(x)};
}

CoeffEstimate coeff_estimate(const FunctionSpec& f, const WeightRow& weights, long n) {
    SaddlePoint sp = solve_saddle(n, weights);
    LambdaMoments lm = lambda_moments(sp, 2);
    CoeffEstimate est;
    est.n = n;
    est.x = sp.x;
    est.lambda0 = lm[0];
    est.lambda2 = lm[2];
    est.log_f_at_x = f.log_at_real(sp.x);
    double log_value = est.log_f_at_x + est.lambda0 -
                       static_cast<double>(n) * sp.log_x() -
                       0.5 * std::log(kTwoPi * est.lambda2);
    est.value = LogReal::from_log(log_value);
    est.claimed_rel_error =
        static_cast<double>(sp.alpha) / static_cast<double>(n) + fnorm(f, sp).value();
    return est;
}

namespace {

// One pass of the midpoint rule with N nodes. Returns the complex integral
// of f(x e^{i theta}) exp(g_n(theta)) over [-pi, pi] as (log_scale, sum).
struct ContourSum {
    double log_scale;
    std::complex<double> sum;  // integral = e^{log_scale} * sum * (2pi/N)
};

ContourSum contour_pass(const FunctionSpec& f, const std::vector<double>& xpow_over_j,
                        const SaddlePoint& sp, long n, int nodes) {
    const double x = sp.x;
    const long alpha = sp.weights ? sp.weights->alpha() : sp.alpha;
    double max_log = -std::numeric_limits<double>::infinity();
    std::complex<double> acc = 0.0;
    const double dtheta = kTwoPi / nodes;
    for (int k = 0; k < nodes; ++k) {
        double th = -M_PI + (static_cast<double>(k) + 0.5) * dtheta;
        // g_n(theta) = sum_j (q_j/j) x^j (e^{ij theta} - 1) - i n theta
        std::complex<double> rot = std::polar(1.0, th), w = 1.0;
        std::complex<double> g = 0.0;
        for (long j = 1; j <= alpha; ++j) {
            w *= rot;
            double c = xpow_over_j[static_cast<std::size_t>(j - 1)];
            if (c != 0.0) g += c * (w - 1.0);
        }
        g -= std::complex<double>(0.0, static_cast<double>(n) * th);
        std::complex<double> lf = f.log_eval(std::polar(x, th));
        double lmag = g.real() + lf.real();
        double phase = g.imag() + lf.imag();
        if (lmag > max_log) {
            acc *= std::exp(max_log - lmag);
            max_log = lmag;
        }
        acc += std::exp(lmag - max_log) * std::polar(1.0, phase);
    }
    return ContourSum{max_log, acc * dtheta};
}

}  // namespace

QuadratureResult coeff_quadrature(const FunctionSpec& f, const WeightRow& weights, long n,
                                  int initial_nodes, double rel_tol, int max_nodes) {
    if (initial_nodes < 64) throw std::invalid_argument("need at least 64 nodes");
    SaddlePoint sp = solve_saddle(n, weights);
    LambdaMoments lm = lambda_moments(sp, 2);
    const long alpha = weights.alpha();
    std::vector<double> xpow_over_j(static_cast<std::size_t>(alpha));
    {
        long double xp = 1.0L;
        for (long j = 1; j <= alpha; ++j) {
            xp *= sp.x_precise;
            xpow_over_j[static_cast<std::size_t>(j - 1)] =
                static_cast<double>(xp) * weights.at(j) / static_cast<double>(j);
        }
    }
    // Start with enough nodes to resolve the Gaussian peak of width 1/sqrt(lambda_2).
    int nodes = initial_nodes;
    while (nodes < std::min<double>(max_nodes, 8.0 * std::sqrt(lm[2]))) nodes *= 2;

    QuadratureResult out;
    ContourSum prev = contour_pass(f, xpow_over_j, sp, n, nodes);
    while (true) {
        int next_nodes = nodes * 2;
        if (next_nodes > max_nodes) break;
        ContourSum cur = contour_pass(f, xpow_over_j, sp, n, next_nodes);
        double num = std::abs(cur.sum.real() * std::exp(cur.log_scale - prev.log_scale) -
                              prev.sum.real());
        out.rel_change = num / std::abs(cur.sum.real() *
                                        std::exp(cur.log_scale - prev.log_scale));
        prev = cur;
        nodes = next_nodes;
        if (out.rel_change <= rel_tol) {
            out.converged = true;
            break;
        }
    }
    out.nodes = nodes;
    double re = prev.sum.real();
    out.imag_ratio = std::abs(prev.sum.imag()) / std::abs(re);
    if (re <= 0.0) throw std::runtime_error("contour quadrature lost positivity");
    double log_value = lm[0] - static_cast<double>(n) * sp.log_x() + prev.log_scale +
                       std::log(re / kTwoPi);
    out.value = LogReal::from_log(log_value);
    return out;
}

}  // namespace cyclecap
