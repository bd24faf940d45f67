#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cyclecap/saddle.hpp"
#include "cyclecap/sampler.hpp"
#include "cyclecap/stats_util.hpp"

namespace cyclecap {

/// Per-sample aggregates: cycle counts C_m, cumulative counts K_m, index
/// sums S_m (all indexed 0..alpha) and the k longest cycle lengths.
struct Summary {
    std::vector<long> C;
    std::vector<long> K;
    std::vector<long> S;
    std::vector<long> longest;
};
Summary summarize(const CycleStructure& cs, long alpha, int k_longest = 3);

/// K_m (or S_m) evaluated at the given nondecreasing cutoffs in one pass.
std::vector<long> cumulative_counts_at(const CycleStructure& cs, std::span<const long> cutoffs);
std::vector<long> cumulative_sizes_at(const CycleStructure& cs, std::span<const long> cutoffs);

enum class PathKind { shape, index_shape, fluctuation, index_fluctuation };

/// A discretized path t -> value on a fixed grid in [0,1].
struct ProcessPath {
    PathKind kind = PathKind::shape;
    std::vector<double> t;
    std::vector<double> value;
};

/// Precomputes, once per (n, alpha, grid): the scales b_t, the centering
/// sums sum_{j<=b_t} x^j/j and sum_{j<=b_t} x^j, and the normalizations.
/// The index centering at b = alpha is n exactly (the saddle identity),
/// which pins the index fluctuation to 0 exactly at t = 1.
class PathBuilder {
  public:
    PathBuilder(long n, long alpha, std::vector<double> t_grid);
    static std::vector<double> uniform_grid(int points);  // 0, 1/(p-1), ..., 1

    const std::vector<double>& grid() const { return t_; }
    const std::vector<long>& cutoffs() const { return b_; }
    const SaddlePoint& saddle() const { return saddle_; }

    ProcessPath shape(const CycleStructure& cs) const;            // K_{b_t} / (n/alpha)
    ProcessPath index_shape(const CycleStructure& cs) const;      // S_{b_t} / n
    ProcessPath fluctuation(const CycleStructure& cs) const;      // L_t
    ProcessPath index_fluctuation(const CycleStructure& cs) const;  // L~_t

    /// sup_t |path - t| over the grid (monotone paths keep the off-grid gap
    /// below the grid mesh).
    static double sup_deviation_from_identity(const ProcessPath& p);

  private:
    long n_, alpha_;
    std::vector<double> t_;
    std::vector<long> b_;
    SaddlePoint saddle_;
    std::vector<double> center_counts_;  // sum_{j<=b_t} x^j / j
    std::vector<double> center_sizes_;   // sum_{j<=b_t} x^j, with n at b = alpha
    double count_scale_, size_scale_;    // sqrt(n/alpha), sqrt(n*alpha)
};

/// Normalized statistic (X - center)/scale over a batch, with its KS
/// distance from the standard normal.
struct MomentReport {
    double mean = 0.0;
    double variance = 0.0;
    double ks_normal = 0.0;
    std::size_t samples = 0;
    bool low_mean_warning = false;  // center below 10: Poisson-like, normal fit poor
    std::vector<double> standardized;
};

/// (C_m - mu_m)/sqrt(mu_m) per sample; mu_m from the saddle point.
MomentReport clt_statistic(std::span<const CycleStructure> samples, long m, double mu_m);

/// (K_alpha - sum_{j<=alpha} x^j/j) / sqrt(n / (alpha log^2(n/alpha))).
MomentReport total_cycle_clt(std::span<const CycleStructure> samples, long n, long alpha);

struct CovarianceEstimate {
    double s = 0.0;
    double t = 0.0;
    double estimate = 0.0;
    double prediction = 0.0;  // s(1-t) for s <= t, the bridge covariance
    double std_error = 0.0;
};

/// Empirical covariance of fluctuation paths at the given (s,t) pairs.
/// Requires at least 100 paths on a common grid containing s and t.
std::vector<CovarianceEstimate> bridge_covariance(
    const std::vector<ProcessPath>& paths,
    std::span<const std::pair<double, double>> pairs);

/// Plug-in total variation between the empirical law of (C_1..C_b) and
/// independent Poisson(1/j); zero for b = 0.
double tv_empirical(std::span<const CycleStructure> samples, long b);

/// Exact P[C_m = j] side by side with the tilted-Poisson prediction
/// e^{-mu} mu^j / j!.
struct TiltCheckRow {
    long j = 0;
    double exact = 0.0;
    double poisson = 0.0;
    double ratio = 0.0;  // exact / poisson
};
std::vector<TiltCheckRow> tilted_poisson_check(long n, long alpha, long m, long j_max = -1);

/// Law of the k longest cycles over a batch.
struct LongestCycleReport {
    int k = 0;
    std::size_t samples = 0;
    std::vector<double> prob_at_alpha;  // P[l_i = alpha], i = 1..k
    std::vector<double> mean_ratio;     // E[l_i / alpha]
    std::vector<std::size_t> defined;   // samples with at least i cycles
    double prob_top_k_all_alpha = 0.0;  // P[l_1 = ... = l_k = alpha]
};
LongestCycleReport longest_cycle_report(std::span<const CycleStructure> samples, int k,
                                        long alpha);

}  // namespace cyclecap
