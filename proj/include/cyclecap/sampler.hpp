#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclecap/counts.hpp"
#include "cyclecap/rng.hpp"

namespace cyclecap {

/// A sampled cycle type: multiplicity of each cycle length. Lengths sum
/// to n and never exceed alpha.
struct CycleStructure {
    std::map<long, long> counts;

    long size() const;      // sum j * C_j
    long num_cycles() const;  // sum C_j
    long max_length() const;
    /// "j:count,j:count,..." with ascending j; the streaming record format.
    std::string to_record() const;
    static CycleStructure from_record(const std::string& line);
};

/// Exact sampler by recursive counting: the cycle containing the smallest
/// remaining element has length j with probability
///     (n-1)!/(n-j)! * a_{n-j} / a_n  =  z_{n-j} / (n z_n),
/// then recurse on the remainder. Probabilities walk from j = min(r, alpha)
/// downward, which is where the mass sits, so a draw costs O(alpha / log(n/alpha))
/// expected table lookups.
class RecursiveSampler {
  public:
    RecursiveSampler(std::shared_ptr<const CountTable> table, long n);
    CycleStructure sample(Philox4x64& rng) const;
    const CountTable& table() const { return *table_; }

  private:
    std::shared_ptr<const CountTable> table_;
    long n_;
};

struct RejectionDiagnostics {
    long attempts = 0;
    double acceptance_rate = 0.0;
    double expected_attempts = 0.0;  // ~ sqrt(2 pi lambda_2) at the saddle tilt
};

class SamplingBudgetError : public std::runtime_error {
  public:
    SamplingBudgetError(const std::string& what, RejectionDiagnostics diag)
        : std::runtime_error(what), diagnostics(diag) {}
    RejectionDiagnostics diagnostics;
};

/// Exact sampler by tilted-Poisson rejection: draw independent
/// Z_j ~ Poisson(tilt^j / j) for j <= alpha and accept when sum j Z_j = n.
/// The conditioned law does not depend on the tilt, so any tilt > 0 is
/// exact; tilt = x_{n,alpha} maximizes the acceptance rate. Throws
/// SamplingBudgetError when attempt_budget is exhausted.
CycleStructure sample_rejection(long n, long alpha, Philox4x64& rng,
                                std::optional<double> tilt = std::nullopt,
                                long attempt_budget = 10'000'000,
                                RejectionDiagnostics* diag = nullptr);

enum class SampleMethod { recursive, rejection };

struct SamplerConfig {
    long n = 0;
    long alpha = 0;
    SampleMethod method = SampleMethod::recursive;
    std::uint64_t seed = 0;
    long batch = 1;
    std::optional<double> tilt;      // rejection only; defaults to x_{n,alpha}
    long attempt_budget = 10'000'000;
    int threads = 1;
};

/// Deterministic batch: sample i draws from substream (seed, i) regardless
/// of thread count or schedule. An existing table for (alpha, n) can be
/// passed to skip rebuilding; it must match the config.
std::vector<CycleStructure> sample_batch(const SamplerConfig& cfg,
                                         std::shared_ptr<const CountTable> table = nullptr);

}  // namespace cyclecap
