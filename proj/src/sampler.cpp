#include "cyclecap/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "cyclecap/saddle.hpp"

namespace cyclecap {

long CycleStructure::size() const {
    long s = 0;
    for (auto& [j, c] : counts) s += j * c;
    return s;
}

long CycleStructure::num_cycles() const {
    long s = 0;
    for (auto& [j, c] : counts) s += c;
    return s;
}

long CycleStructure::max_length() const {
    return counts.empty() ? 0 : counts.rbegin()->first;
}

std::string CycleStructure::to_record() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [j, c] : counts) {
        if (!first) os << ',';
        os << j << ':' << c;
        first = false;
    }
    return os.str();
}

CycleStructure CycleStructure::from_record(const std::string& line) {
    CycleStructure cs;
    std::istringstream is(line);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("bad cycle record: " + line);
        long j = std::stol(tok.substr(0, colon));
        long c = std::stol(tok.substr(colon + 1));
        if (j < 1 || c < 1) throw std::invalid_argument("bad cycle record: " + line);
        cs.counts[j] += c;
    }
    return cs;
}

RecursiveSampler::RecursiveSampler(std::shared_ptr<const CountTable> table, long n)
    : table_(std::move(table)), n_(n) {
    if (!table_) throw std::invalid_argument("recursive sampler needs a count table");
    if (n < 1 || n > table_->max_n())
        throw std::invalid_argument("count table does not cover n");
}

CycleStructure RecursiveSampler::sample(Philox4x64& rng) const {
    const CountTable& t = *table_;
    const long alpha = t.alpha();
    CycleStructure cs;
    long r = n_;
    while (r > 0) {
        const long jmax = std::min(r, alpha);
        const double log_rz = t.log_z(r) + std::log(static_cast<double>(r));
        double u = rng.next_uniform();
        long chosen = 1;  // drift fallback; the identity step always has mass
        for (long j = jmax; j >= 1; --j) {
            u -= std::exp(t.log_z(r - j) - log_rz);
            if (u < 0.0) {
                chosen = j;
                break;
            }
        }
        cs.counts[chosen] += 1;
        r -= chosen;
    }
    return cs;
}

CycleStructure sample_rejection(long n, long alpha, Philox4x64& rng,
                                std::optional<double> tilt, long attempt_budget,
                                RejectionDiagnostics* diag) {
    if (n < 1 || alpha < 1) throw std::invalid_argument("need n >= 1, alpha >= 1");
    if (alpha > n) alpha = n;
    SaddlePoint sp = solve_saddle(n, alpha);
    double x = tilt.value_or(sp.x);
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("tilt must be positive");
    if (static_cast<double>(alpha) * std::log(x) > 600.0)
        throw std::invalid_argument("tilt^alpha overflows; use a smaller tilt");
    std::vector<double> mean(static_cast<std::size_t>(alpha));
    for (long j = 1; j <= alpha; ++j)
        mean[static_cast<std::size_t>(j - 1)] =
            std::exp(static_cast<double>(j) * std::log(x)) / static_cast<double>(j);
    const double expected = std::sqrt(2.0 * M_PI * lambda_moments(sp, 2)[2]);

    for (long attempt = 1; attempt <= attempt_budget; ++attempt) {
        CycleStructure cs;
        long total = 0;
        // large lengths first: overshoots abort early
        for (long j = alpha; j >= 1 && total <= n; --j) {
            long z = rng.poisson(mean[static_cast<std::size_t>(j - 1)]);
            if (z > 0) {
                total += j * z;
                cs.counts[j] = z;
            }
        }
        if (total == n) {
            if (diag) {
                diag->attempts = attempt;
                diag->acceptance_rate = 1.0 / static_cast<double>(attempt);
                diag->expected_attempts = expected;
            }
            return cs;
        }
    }
    RejectionDiagnostics d;
    d.attempts = attempt_budget;
    d.acceptance_rate = 0.0;
    d.expected_attempts = expected;
    std::ostringstream os;
    os << "rejection sampler exhausted " << attempt_budget << " attempts at n=" << n
       << " alpha=" << alpha << " tilt=" << x << " (expected ~" << expected
       << " attempts at the saddle tilt)";
    throw SamplingBudgetError(os.str(), d);
}

std::vector<CycleStructure> sample_batch(const SamplerConfig& cfg,
                                         std::shared_ptr<const CountTable> table) {
    if (cfg.batch < 1) throw std::invalid_argument("batch must be >= 1");
    if (cfg.n < 1 || cfg.alpha < 1) throw std::invalid_argument("need n >= 1, alpha >= 1");
    const long alpha = std::min(cfg.alpha, cfg.n);
    if (cfg.method == SampleMethod::recursive) {
        if (!table) {
            table = std::make_shared<CountTable>(
                alpha, cfg.n, cfg.n <= 2000 ? CountMode::exact : CountMode::logspace);
        } else if (table->alpha() != alpha || table->max_n() < cfg.n) {
            throw std::invalid_argument("supplied count table does not match config");
        }
    }
    std::vector<CycleStructure> out(static_cast<std::size_t>(cfg.batch));
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&](long lo, long hi) {
        try {
            std::optional<RecursiveSampler> rec;
            if (cfg.method == SampleMethod::recursive) rec.emplace(table, cfg.n);
            for (long i = lo; i < hi; ++i) {
                Philox4x64 rng(cfg.seed, static_cast<std::uint64_t>(i));
                out[static_cast<std::size_t>(i)] =
                    rec ? rec->sample(rng)
                        : sample_rejection(cfg.n, alpha, rng, cfg.tilt, cfg.attempt_budget);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
        }
    };
    int threads = std::max(1, cfg.threads);
    if (threads == 1 || cfg.batch < 2) {
        worker(0, cfg.batch);
    } else {
        threads = std::min<long>(threads, cfg.batch);
        std::vector<std::thread> pool;
        long chunk = (cfg.batch + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            long lo = t * chunk, hi = std::min<long>(cfg.batch, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace cyclecap
