#include "cyclecap/saddle.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace cyclecap {

namespace {

// sum_{j=1}^{alpha} q_j x^j by Horner, extended precision. Intermediate
// values stay below the root's sum value, so no overflow for x near the root.
long double weighted_power_sum(const std::vector<double>& q, long double x) {
    long double s = 0.0L;
    for (std::size_t i = q.size(); i-- > 0;) s = s * x + static_cast<long double>(q[i]);
    return s * x;
}

long double unit_power_sum(long alpha, long double x) {
    long double s = 0.0L;
    for (long j = 0; j < alpha; ++j) s = s * x + 1.0L;
    return s * x;
}

// d/dx of the sum: sum_j q_j j x^{j-1}
long double weighted_power_sum_deriv(const std::vector<double>& q, long double x) {
    long double s = 0.0L, xp = 1.0L;
    for (std::size_t i = 0; i < q.size(); ++i) {
        s += static_cast<long double>(q[i]) * static_cast<long double>(i + 1) * xp;
        xp *= x;
    }
    return s;
}

long double unit_power_sum_deriv(long alpha, long double x) {
    long double s = 0.0L, xp = 1.0L;
    for (long j = 1; j <= alpha; ++j) {
        s += static_cast<long double>(j) * xp;
        xp *= x;
    }
    return s;
}

struct Bracket {
    long double lo, hi;
};

// Root refinement: bisection to relative width 1e-13, then Newton polish.
long double refine_root(long n, const std::vector<double>* q, long alpha, Bracket br) {
    auto eval = [&](long double x) {
        return (q ? weighted_power_sum(*q, x) : unit_power_sum(alpha, x)) -
               static_cast<long double>(n);
    };
    long double lo = br.lo, hi = br.hi;
    if (eval(lo) > 0.0L) return lo;  // degenerate bracket, lo is already the root
    while (hi - lo > 1e-13L * hi) {
        long double mid = 0.5L * (lo + hi);
        if (eval(mid) > 0.0L)
            hi = mid;
        else
            lo = mid;
    }
    long double x = 0.5L * (lo + hi);
    for (int it = 0; it < 5; ++it) {
        long double f = eval(x);
        long double d = q ? weighted_power_sum_deriv(*q, x) : unit_power_sum_deriv(alpha, x);
        if (d <= 0.0L) break;
        long double step = f / d;
        long double next = x - step;
        if (next < br.lo || next > br.hi) break;
        x = next;
        if (std::abs(step) < 1e-20L * x) break;
    }
    return x;
}

}  // namespace

SaddlePoint solve_saddle(long n, long alpha) {
    if (n < 1 || alpha < 1) throw std::invalid_argument("need n >= 1 and alpha >= 1");
    if (alpha > n) alpha = n;  // alpha >= n imposes no constraint
    SaddlePoint sp;
    sp.n = n;
    sp.alpha = alpha;
    if (alpha == n) {
        sp.x = 1.0;
        sp.x_precise = 1.0L;
        sp.residual = 0.0;
        return sp;
    }
    // Bracket forced by x^alpha <= sum <= alpha*x^alpha for x >= 1.
    const double a = static_cast<double>(alpha), nn = static_cast<double>(n);
    Bracket br{std::pow(nn / a, 1.0 / a), std::pow(nn, 1.0 / a)};
    assert(br.lo >= 1.0L && br.lo <= br.hi * (1 + 1e-12L));
    if (br.lo > br.hi) br.lo = br.hi;
    long double x = refine_root(n, nullptr, alpha, br);
    assert(x >= br.lo * (1 - 1e-12L) && x <= br.hi * (1 + 1e-12L));
    sp.x_precise = x;
    sp.x = static_cast<double>(x);
    sp.residual = std::abs(static_cast<double>(unit_power_sum(alpha, x) - n));
    return sp;
}

SaddlePoint solve_saddle(long n, const WeightRow& weights) {
    if (n < 1) throw std::invalid_argument("need n >= 1");
    SaddlePoint sp;
    sp.n = n;
    sp.alpha = weights.alpha();
    sp.weights = weights;
    const std::vector<double>& q = weights.values();
    // Bracket by doubling/halving around 1; the sum is strictly increasing.
    long double lo = 1.0L, hi = 1.0L;
    long double at1 = weighted_power_sum(q, 1.0L);
    if (at1 < static_cast<long double>(n)) {
        hi = 2.0L;
        while (weighted_power_sum(q, hi) < static_cast<long double>(n)) {
            lo = hi;
            hi *= 2.0L;
            if (hi > 1e30L) throw std::runtime_error("saddle bracket search diverged");
        }
    } else if (at1 > static_cast<long double>(n)) {
        lo = 0.5L;
        while (weighted_power_sum(q, lo) > static_cast<long double>(n)) {
            hi = lo;
            lo *= 0.5L;
            if (lo < 1e-300L) throw std::runtime_error("saddle bracket search diverged");
        }
    }
    long double x = (at1 == static_cast<long double>(n)) ? 1.0L
                                                         : refine_root(n, &q, sp.alpha, {lo, hi});
    sp.x_precise = x;
    sp.x = static_cast<double>(x);
    sp.residual = std::abs(static_cast<double>(weighted_power_sum(q, x) - n));
    return sp;
}

LambdaMoments lambda_moments(const SaddlePoint& sp, int p_max) {
    if (p_max < 0 || p_max > 4) throw std::invalid_argument("p_max must be in [0,4]");
    LambdaMoments lm;
    lm.p_max = p_max;
    long double acc[5] = {0.0L, 0.0L, 0.0L, 0.0L, 0.0L};
    long double xp = 1.0L;
    for (long j = 1; j <= sp.alpha; ++j) {
        xp *= sp.x_precise;
        long double w = sp.weights ? static_cast<long double>(sp.weights->at(j)) : 1.0L;
        if (w == 0.0L) continue;
        long double base = w * xp / static_cast<long double>(j);  // q_j x^j j^{-1} = p=0 term
        long double jp = 1.0L;
        for (int p = 0; p <= p_max; ++p) {
            acc[p] += base * jp;
            jp *= static_cast<long double>(j);
        }
    }
    for (int p = 0; p <= p_max; ++p) lm.lambda[static_cast<std::size_t>(p)] = static_cast<double>(acc[p]);
    return lm;
}

double mu(const SaddlePoint& sp, long m) {
    if (m < 1 || m > sp.alpha) throw std::invalid_argument("need 1 <= m <= alpha");
    return std::exp(static_cast<double>(m) * sp.log_x()) / static_cast<double>(m);
}

double mu(long n, long alpha, long m) { return mu(solve_saddle(n, alpha), m); }

double mu_log_asymptotic(long n, long alpha, long m) {
    if (alpha >= n) throw std::invalid_argument("need alpha < n");
    double ratio = static_cast<double>(n) / static_cast<double>(alpha);
    if (ratio <= std::exp(1.0)) throw std::invalid_argument("need n/alpha > e");
    return (static_cast<double>(m) / static_cast<double>(alpha)) *
           (std::log(ratio) + std::log(std::log(ratio)));
}

Regime regime_classify(long n, long alpha, long m) {
    if (m < 1 || m > alpha) throw std::invalid_argument("need 1 <= m <= alpha");
    if (n < 2) return Regime::classical;
    const double logn = std::log(static_cast<double>(n));
    const double beta = std::log(static_cast<double>(alpha)) / logn;
    // divergence threshold c >= beta/(1-beta) for m = c*alpha, only if beta < 1
    if (beta < 1.0) {
        double c = static_cast<double>(m) / static_cast<double>(alpha);
        if (c >= beta / (1.0 - beta)) return Regime::divergent_boundary;
    }
    // classical/intermediate cut at m*log(n)/alpha = 0.5
    double y = static_cast<double>(m) * logn / static_cast<double>(alpha);
    return y < 0.5 ? Regime::classical : Regime::intermediate;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::classical: return "classical";
        case Regime::intermediate: return "intermediate";
        case Regime::divergent_boundary: return "divergent-boundary";
    }
    return "?";
}

long quantile_length(long n, long alpha, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("t must be in [0,1]");
    if (alpha > n) alpha = n;
    if (t == 0.0) return 0;
    if (t == 1.0) return alpha;
    double lr = std::log(static_cast<double>(n) / static_cast<double>(alpha));
    if (lr <= 0.0) return 0;  // alpha = n: every t < 1 collapses to 0
    double shift = std::floor(std::log(t) * static_cast<double>(alpha) / lr);
    double b = static_cast<double>(alpha) + shift;
    return b > 0.0 ? static_cast<long>(b) : 0;
}

AdmissibilityReport check_admissibility(const WeightRow& weights, long n) {
    AdmissibilityReport rep;
    rep.n = n;
    rep.alpha = weights.alpha();
    SaddlePoint sp = solve_saddle(n, weights);
    double lr = std::log(static_cast<double>(n) / static_cast<double>(rep.alpha));
    rep.cond_ratio_i = lr > 0.0 ? static_cast<double>(rep.alpha) * sp.log_x() / lr : 0.0;
    LambdaMoments lm = lambda_moments(sp, 2);
    rep.cond_ratio_ii = lm[2] / (static_cast<double>(n) * static_cast<double>(rep.alpha));
    // condition (iii): q_j >= c > 0 on a suffix [b, alpha], b <= (1-delta)*alpha
    constexpr double kMinWeight = 1e-9;
    constexpr double kMinDelta = 0.05;
    const auto& q = weights.values();
    double suffix_min = std::numeric_limits<double>::infinity();
    long best_b = 0;
    for (long b = rep.alpha; b >= 1; --b) {
        suffix_min = std::min(suffix_min, q[static_cast<std::size_t>(b - 1)]);
        if (suffix_min >= kMinWeight) best_b = b;
        if (suffix_min < kMinWeight) break;  // smaller b cannot recover
    }
    if (best_b > 0) {
        double delta = 1.0 - static_cast<double>(best_b) / static_cast<double>(rep.alpha);
        if (delta >= kMinDelta || rep.alpha == 1) {
            rep.cond_iii_ok = true;
            rep.witness_b = best_b;
            rep.witness_delta = delta;
            double c = std::numeric_limits<double>::infinity();
            for (long j = best_b; j <= rep.alpha; ++j)
                c = std::min(c, q[static_cast<std::size_t>(j - 1)]);
            rep.witness_c = c;
        }
    }
    return rep;
}

std::vector<AdmissibilityReport> check_admissibility(
    const std::function<WeightRow(long)>& family, const std::vector<long>& n_grid) {
    std::vector<AdmissibilityReport> out;
    out.reserve(n_grid.size());
    for (long n : n_grid) out.push_back(check_admissibility(family(n), n));
    return out;
}

}  // namespace cyclecap
