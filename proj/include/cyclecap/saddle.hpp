#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cyclecap/counts.hpp"

namespace cyclecap {

/// Solution of n = sum_{j<=alpha} q_j x^j. For unit weights this is the
/// saddle point x_{n,alpha}: the unique positive root, equal to 1 exactly
/// when alpha >= n and > 1 otherwise.
///
/// x_precise carries the root in extended precision: for alpha beyond a few
/// hundred the derivative of the defining sum is so large that one double
/// ulp of x moves the sum by more than 1e-12*n, so the residual contract
/// can only hold for the extended-precision value. residual is evaluated
/// at x_precise.
struct SaddlePoint {
    double x = 1.0;
    long double x_precise = 1.0L;
    double residual = 0.0;
    long n = 0;
    long alpha = 0;
    std::optional<WeightRow> weights;  // empty for unit weights

    double log_x() const { return static_cast<double>(std::log(x_precise)); }
};

/// Unit-weight saddle equation (alpha >= n is treated as alpha = n).
SaddlePoint solve_saddle(long n, long alpha);
/// Weighted saddle equation; rejects all-zero weight rows.
SaddlePoint solve_saddle(long n, const WeightRow& weights);

/// lambda_p = sum_j q_j j^{p-1} x^j for p = 0..p_max (p_max <= 4).
/// lambda_1 equals n by the saddle equation.
struct LambdaMoments {
    std::array<double, 5> lambda{};
    int p_max = 4;
    double operator[](int p) const { return lambda[static_cast<std::size_t>(p)]; }
};
LambdaMoments lambda_moments(const SaddlePoint& sp, int p_max = 4);

/// mu_m = x_{n,alpha}^m / m, the asymptotic expected number of m-cycles.
double mu(const SaddlePoint& sp, long m);
double mu(long n, long alpha, long m);

/// The predicted value (m/alpha) * (log(n/alpha) + log log(n/alpha)) of
/// log(m * mu_m); requires n/alpha > e.
double mu_log_asymptotic(long n, long alpha, long m);

/// Growth regime of E[C_m] by the m-scale thresholds: counts at scales
/// m = o(alpha/log n) behave like unconstrained ones (classical); around
/// m ~ y*alpha/log n the constraint becomes visible (intermediate); for
/// m = c*alpha with c >= beta/(1-beta), alpha = n^beta, the expected count
/// diverges (divergent boundary).
enum class Regime { classical, intermediate, divergent_boundary };
Regime regime_classify(long n, long alpha, long m);
std::string regime_name(Regime r);

/// The length scale b_t = max{alpha + floor(log(t) * alpha / log(n/alpha)), 0}
/// below which a fraction t of all cycles accumulates. b_0 := 0 by
/// convention, b_1 = alpha; for alpha = n the scale degenerates to 0 for
/// every t < 1.
long quantile_length(long n, long alpha, double t);

/// Numerical check of the admissibility conditions for a weight family:
/// (i) alpha*log(x)/log(n/alpha) bounded, (ii) lambda_2/(n*alpha) bounded,
/// (iii) weights bounded below on a suffix [b, alpha] with b <= (1-delta)*alpha.
/// The witness reports the smallest such b with its suffix minimum.
struct AdmissibilityReport {
    long n = 0;
    long alpha = 0;
    double cond_ratio_i = 0.0;
    double cond_ratio_ii = 0.0;
    bool cond_iii_ok = false;
    long witness_b = 0;
    double witness_c = 0.0;
    double witness_delta = 0.0;
};
AdmissibilityReport check_admissibility(const WeightRow& weights, long n);
std::vector<AdmissibilityReport> check_admissibility(
    const std::function<WeightRow(long)>& family, const std::vector<long>& n_grid);

}  // namespace cyclecap
