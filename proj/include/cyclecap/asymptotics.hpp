#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "cyclecap/counts.hpp"
#include "cyclecap/logreal.hpp"
#include "cyclecap/saddle.hpp"

namespace cyclecap {

/// Prefactor f(z) in front of the weighted exponential generating function.
/// The four shapes cover everything the coefficient estimates need:
///     one              f(z) = 1
///     monomial         f(z) = z^m / m
///     exp_linear       f(z) = exp( sum_k (e^{s_k}-1) z^{m_k}/m_k )
///     exp_partial_sum  f(z) = exp( sum_{j<=b} (z^j-1)/j )
/// Every shape evaluates at complex z without branch trouble (the exp
/// forms never take a complex log) and carries a certified upper bound for
/// its oscillation norm.
class FunctionSpec {
  public:
    enum class Kind { one, monomial, exp_linear, exp_partial_sum };

    static FunctionSpec one();
    static FunctionSpec monomial(long m);
    static FunctionSpec exp_linear(std::vector<std::pair<double, long>> s_and_m);
    static FunctionSpec exp_partial_sum(long b);

    Kind kind() const { return kind_; }
    long degree() const { return m_; }
    long partial_b() const { return b_; }
    const std::vector<std::pair<double, long>>& terms() const { return terms_; }

    /// log f(z): real part is log|f|, imaginary part a phase (any branch;
    /// only exp(log f) is consumed).
    std::complex<double> log_eval(std::complex<double> z) const;
    /// f'(z)/f(z).
    std::complex<double> dlog_eval(std::complex<double> z) const;
    /// log f(x) for real x > 0 (f is positive there for all four shapes).
    double log_at_real(double x) const;
    /// Analytic upper bound for sup_{|theta|<=theta_n} |f'(x e^{i theta})| / f(x).
    double deriv_sup_bound(double x) const;

    std::string describe() const;

  private:
    Kind kind_ = Kind::one;
    long m_ = 0;
    long b_ = 0;
    std::vector<std::pair<double, long>> terms_;
};

/// theta_n = n^{-5/12} alpha^{-7/12}, the arc half-width inside which the
/// saddle-point Gaussian carries all but a vanishing part of the contour
/// integral.
double theta_n(long n, long alpha);

/// Oscillation norm theta_n * sup_{|theta|<=theta_n} |f'(x e^{i theta})|/|f(x)|.
/// grid is the sampled sup over 33 points; bound is the certified analytic
/// upper estimate (grid <= bound up to rounding). value() reports the bound.
struct FNorm {
    double grid = 0.0;
    double bound = 0.0;
    double value() const { return bound; }
};
FNorm fnorm(const FunctionSpec& f, const SaddlePoint& sp);

/// Saddle-point estimate f(x) e^{lambda_0} / (x^n sqrt(2 pi lambda_2)) of
/// [z^n] f(z) exp(sum_j (q_j/j) z^j), with its claimed relative error
/// alpha/n + fnorm.
struct CoeffEstimate {
    LogReal value;
    double log_f_at_x = 0.0;
    double lambda0 = 0.0;
    double lambda2 = 0.0;
    double x = 1.0;
    long n = 0;
    double claimed_rel_error = 0.0;
};
CoeffEstimate coeff_estimate(const FunctionSpec& f, const WeightRow& weights, long n);

/// The same coefficient by direct contour quadrature on the saddle circle:
/// (2 pi)^{-1} x^{-n} e^{lambda_0} integral of f(x e^{i theta}) e^{g_n(theta)}
/// over [-pi, pi], midpoint rule with node doubling until the value is
/// stable to rel_tol. The integrand is entire on the circle, so convergence
/// is geometric once the Gaussian peak is resolved.
struct QuadratureResult {
    LogReal value;
    int nodes = 0;
    double rel_change = 0.0;      // relative change at the last doubling
    double imag_ratio = 0.0;      // |imag| / |real| of the accumulated integral
    bool converged = false;
};
QuadratureResult coeff_quadrature(const FunctionSpec& f, const WeightRow& weights, long n,
                                  int initial_nodes = 64, double rel_tol = 1e-9,
                                  int max_nodes = 1 << 21);

}  // namespace cyclecap
