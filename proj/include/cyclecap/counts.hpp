#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyclecap/logreal.hpp"

namespace cyclecap {

/// Exact nonnegative integer count; arbitrary precision.
using BigCount = mpz_class;

/// One row of nonnegative cycle-length weights q_j, j = 1..alpha.
/// Unit weights reproduce plain constrained permutations; indicator ranges
/// give the tail sums used by prefix laws and by sums of j * Poisson(1/j).
class WeightRow {
  public:
    explicit WeightRow(std::vector<double> q);
    static WeightRow unit(long alpha);
    /// 1 on [lo, hi], 0 below lo. Support still indexed 1..hi.
    static WeightRow indicator_range(long lo, long hi);
    static WeightRow from_map(const std::map<long, double>& q);

    long alpha() const { return static_cast<long>(q_.size()); }
    double at(long j) const { return q_[static_cast<std::size_t>(j - 1)]; }
    const std::vector<double>& values() const { return q_; }

  private:
    std::vector<double> q_;
};

enum class CountMode { exact, logspace };

/// Counts a_0..a_max_n of permutations with every cycle length <= alpha.
/// Exact mode keeps arbitrary-precision integers; both modes keep
/// log Z_{r,alpha} = log(a_r / r!), which is what sampling and asymptotic
/// work consume. Tables are immutable once built and safe to share across
/// threads.
class CountTable {
  public:
    CountTable(long alpha, long max_n, CountMode mode);

    long alpha() const { return alpha_; }
    long max_n() const { return max_n_; }
    CountMode mode() const { return mode_; }

    /// |S_{n,alpha}| as an exact integer (exact mode only).
    const BigCount& exact_count(long n) const;
    /// |S_{n,alpha}| in either mode.
    LogReal count(long n) const;
    /// Z_{n,alpha} = |S_{n,alpha}| / n!, in (0, 1]; exactly one iff alpha >= n.
    LogReal z(long n) const;
    double log_z(long n) const;

    void save(const std::string& path) const;
    static CountTable load(const std::string& path);
    /// Cache file name for a given key, e.g. "counts_a50_n500_exact.v1.bin".
    static std::string cache_name(long alpha, long max_n, CountMode mode);

  private:
    CountTable() = default;
    long alpha_ = 0;
    long max_n_ = 0;
    CountMode mode_ = CountMode::logspace;
    std::vector<double> logz_;
    std::vector<BigCount> exact_;
};

/// |S_{n,alpha}| via the one-shot recurrence. Convenience wrapper around
/// CountTable for single queries.
LogReal count_constrained(long n, long alpha, CountMode mode = CountMode::exact);
BigCount count_constrained_exact(long n, long alpha);

/// Z_{n,alpha} = |S_{n,alpha}|/n!.
LogReal z_norm(long n, long alpha);

/// Exact counts of permutations of 0..max_n elements with all cycle lengths
/// in [j_lo, j_hi].
std::vector<BigCount> exact_perm_counts(long max_n, long j_lo, long j_hi);

/// log c_r for r = 0..max_n where c_r = [z^r] exp(sum_j (q_j/j) z^j),
/// via the convolution recurrence r*c_r = sum_j q_j c_{r-j}.
/// Entries are -inf where the coefficient vanishes. Rejects negative weights.
std::vector<double> log_coeff_weighted(const WeightRow& q, long max_n);

/// [z^n] exp(sum_j (q_j/j) z^j) as a LogReal.
LogReal coeff_weighted(long n, const WeightRow& q);

/// P[T_{b1,b2} = k] where T_{b1,b2} = sum_{j=b1+1}^{b2} j Z_j with
/// independent Z_j ~ Poisson(1/j).
double poisson_sum_pmf(long k, long b1, long b2);
/// The pmf for k = 0..k_max in one pass.
std::vector<double> poisson_sum_pmf_table(long k_max, long b1, long b2);

/// Exact joint law of (C_1,...,C_b) under the uniform measure on
/// S_{n,alpha}. Cells are keyed by the count vector (a_1..a_b); only cells
/// with positive probability appear. Probabilities are computed in exact
/// rational arithmetic and rounded once at the end.
struct PrefixLaw {
    long n = 0;
    long alpha = 0;
    long b = 0;
    std::map<std::vector<long>, double> probabilities;

    double total() const;
    /// E[C_j] for j = 1..b accumulated from the cells.
    std::vector<double> marginal_means() const;
};

/// Enumerates the lattice {a : sum j*a_j <= n} depth-first. Throws
/// std::length_error with the required cell count if it exceeds max_cells.
PrefixLaw exact_prefix_law(long n, long alpha, long b,
                           std::size_t max_cells = std::size_t(1) << 22);

/// Exact total variation distance between the law of (C_1..C_b) under
/// S_{n,alpha} and independent Poisson(1/j), j <= b. Uses
/// TV = sum_w (P(w) - Q(w))_+ ; terms outside the feasible lattice have
/// P = 0 and contribute nothing, so the finite sum is exact and the
/// Poisson mass off the lattice is accounted for by that identity.
double tv_exact(long n, long alpha, long b,
                std::size_t max_cells = std::size_t(1) << 22);

}  // namespace cyclecap
