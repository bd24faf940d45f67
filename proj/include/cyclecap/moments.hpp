#pragma once

#include <vector>

#include "cyclecap/counts.hpp"

namespace cyclecap {

/// Exact finite-n moments of cycle counts under the uniform measure on
/// S_{n,alpha}, from coefficient ratios of the generating function:
/// the factorial moments satisfy E[(C_m)_k] = Z_{n-km,alpha} / (m^k Z_{n,alpha}).
/// All functions take a CountTable built with the same alpha and max_n >= n.

/// E[C_m]; zero for m > alpha.
double expected_cycle_count(const CountTable& table, long n, long m);

/// E[C_m (C_m - 1) ... (C_m - k + 1)].
double falling_factorial_moment(const CountTable& table, long n, long m, int k);

/// Cov(C_m1, C_m2); handles m1 == m2 (variance).
double cycle_count_covariance(const CountTable& table, long n, long m1, long m2);

/// E[K_b] = sum_{m<=b} E[C_m].
double expected_cumulative_count(const CountTable& table, long n, long b);

/// Var(K_b); O(b^2) table lookups.
double cumulative_count_variance(const CountTable& table, long n, long b);

/// Cov(K_b1, K_b2); O(b1*b2) table lookups.
double cumulative_count_cross_covariance(const CountTable& table, long n, long b1, long b2);

/// E[S_b] = sum_{m<=b} m E[C_m] and Var(S_b).
double expected_cumulative_size(const CountTable& table, long n, long b);
double cumulative_size_variance(const CountTable& table, long n, long b);

/// Exact marginal pmf P[C_m = j] for j = 0..j_max (j_max < 0 means: extend
/// until the accumulated mass exceeds 1 - 1e-12 or j*m exceeds n). Computed
/// by splitting the length m out of the generating function.
std::vector<double> exact_marginal_pmf(long n, long alpha, long m, long j_max = -1);

}  // namespace cyclecap
