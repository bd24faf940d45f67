#include "cyclecap/rng.hpp"

#include <cmath>

namespace cyclecap {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline std::array<std::uint64_t, 4> round_once(const std::array<std::uint64_t, 4>& ctr,
                                               const std::array<std::uint64_t, 2>& key) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, ctr[0], hi0, lo0);
    mulhilo(kMult1, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(std::array<std::uint64_t, 4> counter,
                                               std::array<std::uint64_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round_once(counter, key);
    }
    return counter;
}

std::uint64_t Philox4x64::next_u64() {
    if (buffered_ == 0) {
        buffer_ = block(counter_, key_);
        buffered_ = 4;
        for (int i = 0; i < 4; ++i) {
            if (++counter_[i] != 0) break;
        }
    }
    return buffer_[4 - buffered_--];
}

double Philox4x64::next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

long Philox4x64::poisson(double mean) {
    if (mean <= 0.0) return 0;
    return mean < 10.0 ? poisson_inversion(mean) : poisson_ptrs(mean);
}

long Philox4x64::poisson_inversion(double mean) {
    double u = next_uniform();
    double p = std::exp(-mean);
    double cdf = p;
    long k = 0;
    const long cap = static_cast<long>(mean + 40.0 * std::sqrt(mean) + 50.0);
    while (u > cdf && k < cap) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

long Philox4x64::poisson_ptrs(double mean) {
    // Hormann (1993), transformed rejection with squeeze, as used by numpy.
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        double u = next_uniform() - 0.5;
        double v = next_uniform();
        double us = 0.5 - std::abs(u);
        long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
        if (us >= 0.07 && v <= vr) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + static_cast<double>(k) * loglam - std::lgamma(static_cast<double>(k) + 1.0)) {
            return k;
        }
    }
}

}  // namespace cyclecap
