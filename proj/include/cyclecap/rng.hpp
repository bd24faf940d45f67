#pragma once

#include <array>
#include <cstdint>

namespace cyclecap {

/// Counter-based generator: philox4x64 with 10 rounds, the variant used by
/// numpy.random.Philox. Each (seed, stream) pair is an independent substream;
/// batch index i of a seeded experiment always draws from stream i, which
/// makes output independent of thread scheduling.
class Philox4x64 {
  public:
    static constexpr const char* kAlgorithmId = "philox4x64-10";

    Philox4x64(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{seed, stream}, counter_{0, 0, 0, 0} {}

    std::uint64_t next_u64();

    /// Uniform on the open interval (0,1): ((x >> 11) + 0.5) * 2^-53.
    double next_uniform();

    /// Poisson sample. Inversion by sequential search for mean < 10,
    /// Hormann's PTRS transformed rejection for mean >= 10; both sample the
    /// exact Poisson law up to floating-point rounding of the pmf.
    long poisson(double mean);

    /// One raw block, exposed for known-answer tests.
    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> counter,
                                              std::array<std::uint64_t, 2> key);

  private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> buffer_{};
    int buffered_ = 0;

    long poisson_inversion(double mean);
    long poisson_ptrs(double mean);
};

}  // namespace cyclecap
