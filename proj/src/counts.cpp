#include "cyclecap/counts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cyclecap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_mpz(const mpz_class& v) {
    if (v == 0) return kNegInf;
    signed long exp2;
    double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(d) + static_cast<double>(exp2) * M_LN2;
}

void check_n_alpha(long n, long alpha) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
}

}  // namespace

WeightRow::WeightRow(std::vector<double> q) : q_(std::move(q)) {
    if (q_.empty()) throw std::invalid_argument("WeightRow needs at least one entry");
    bool any = false;
    for (double w : q_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weights must be finite and nonnegative");
        any = any || w > 0.0;
    }
    if (!any) throw std::invalid_argument("weights must not be identically zero");
}

WeightRow WeightRow::unit(long alpha) {
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    return WeightRow(std::vector<double>(static_cast<std::size_t>(alpha), 1.0));
}

WeightRow WeightRow::indicator_range(long lo, long hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("need 1 <= lo <= hi");
    std::vector<double> q(static_cast<std::size_t>(hi), 0.0);
    for (long j = lo; j <= hi; ++j) q[static_cast<std::size_t>(j - 1)] = 1.0;
    return WeightRow(std::move(q));
}

WeightRow WeightRow::from_map(const std::map<long, double>& q) {
    if (q.empty()) throw std::invalid_argument("empty weight map");
    long hi = q.rbegin()->first;
    if (q.begin()->first < 1) throw std::invalid_argument("cycle lengths start at 1");
    std::vector<double> v(static_cast<std::size_t>(hi), 0.0);
    for (auto& [j, w] : q) v[static_cast<std::size_t>(j - 1)] = w;
    return WeightRow(std::move(v));
}

CountTable::CountTable(long alpha, long max_n, CountMode mode)
    : alpha_(alpha), max_n_(max_n), mode_(mode) {
    check_n_alpha(max_n, alpha);
    logz_.assign(static_cast<std::size_t>(max_n_) + 1, 0.0);
    if (mode_ == CountMode::exact) {
        // a_r = sum_{j<=min(r,alpha)} (r-1)!/(r-j)! * a_{r-j}
        exact_.assign(static_cast<std::size_t>(max_n_) + 1, BigCount(0));
        exact_[0] = 1;
        mpz_class ff, term;
        for (long r = 1; r <= max_n_; ++r) {
            mpz_class acc = 0;
            ff = 1;  // (r-1)!/(r-j)! for the current j, starting at j=1
            long jmax = std::min(r, alpha_);
            for (long j = 1; j <= jmax; ++j) {
                if (j > 1) ff *= (r - j + 1);
                term = ff * exact_[static_cast<std::size_t>(r - j)];
                acc += term;
            }
            exact_[static_cast<std::size_t>(r)] = acc;
            logz_[static_cast<std::size_t>(r)] =
                log_mpz(acc) - std::lgamma(static_cast<double>(r) + 1.0);
        }
    } else {
        // z_r = (1/r) sum_{j<=min(r,alpha)} z_{r-j}, in log space
        std::vector<double>& lz = logz_;
        for (long r = 1; r <= max_n_; ++r) {
            long lo = std::max<long>(0, r - alpha_);
            double m = kNegInf, s = 0.0;
            for (long i = r - 1; i >= lo; --i) {
                double t = lz[static_cast<std::size_t>(i)];
                if (t <= m) {
                    s += std::exp(t - m);
                } else {
                    s = s * std::exp(m - t) + 1.0;
                    m = t;
                }
            }
            lz[static_cast<std::size_t>(r)] = m + std::log(s) - std::log(static_cast<double>(r));
        }
    }
}

const BigCount& CountTable::exact_count(long n) const {
    if (mode_ != CountMode::exact) throw std::logic_error("table was built in logspace mode");
    if (n < 0 || n > max_n_) throw std::out_of_range("n outside table");
    return exact_[static_cast<std::size_t>(n)];
}

LogReal CountTable::count(long n) const {
    if (n < 0 || n > max_n_) throw std::out_of_range("n outside table");
    return LogReal::from_log(logz_[static_cast<std::size_t>(n)] +
                             std::lgamma(static_cast<double>(n) + 1.0));
}

LogReal CountTable::z(long n) const {
    if (n < 0 || n > max_n_) throw std::out_of_range("n outside table");
    if (n <= alpha_) return LogReal::one();  // unconstrained: Z = 1 exactly
    return LogReal::from_log(logz_[static_cast<std::size_t>(n)]);
}

double CountTable::log_z(long n) const { return z(n).log_magnitude; }

namespace {
constexpr char kMagic[4] = {'C', 'C', 'T', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
}  // namespace

void CountTable::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write(kMagic, 4);
    put(os, kFormatVersion);
    put(os, static_cast<std::uint8_t>(mode_ == CountMode::exact ? 1 : 0));
    put(os, static_cast<std::int64_t>(alpha_));
    put(os, static_cast<std::int64_t>(max_n_));
    os.write(reinterpret_cast<const char*>(logz_.data()),
             static_cast<std::streamsize>(logz_.size() * sizeof(double)));
    if (mode_ == CountMode::exact) {
        for (const BigCount& v : exact_) {
            std::size_t nbytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
            std::vector<unsigned char> buf(std::max<std::size_t>(nbytes, 1));
            std::size_t written = 0;
            mpz_export(buf.data(), &written, 1, 1, 0, 0, v.get_mpz_t());
            put(os, static_cast<std::uint32_t>(written));
            os.write(reinterpret_cast<const char*>(buf.data()),
                     static_cast<std::streamsize>(written));
        }
    }
    if (!os) throw std::runtime_error("short write to " + path);
}

CountTable CountTable::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a count-table cache");
    if (get<std::uint32_t>(is) != kFormatVersion)
        throw std::runtime_error(path + ": unsupported cache version");
    CountTable t;
    t.mode_ = get<std::uint8_t>(is) ? CountMode::exact : CountMode::logspace;
    t.alpha_ = static_cast<long>(get<std::int64_t>(is));
    t.max_n_ = static_cast<long>(get<std::int64_t>(is));
    if (t.alpha_ < 1 || t.max_n_ < 0) throw std::runtime_error(path + ": corrupt header");
    t.logz_.resize(static_cast<std::size_t>(t.max_n_) + 1);
    is.read(reinterpret_cast<char*>(t.logz_.data()),
            static_cast<std::streamsize>(t.logz_.size() * sizeof(double)));
    if (t.mode_ == CountMode::exact) {
        t.exact_.resize(t.logz_.size());
        for (BigCount& v : t.exact_) {
            auto nbytes = get<std::uint32_t>(is);
            std::vector<unsigned char> buf(nbytes);
            is.read(reinterpret_cast<char*>(buf.data()), nbytes);
            if (nbytes == 0)
                v = 0;
            else
                mpz_import(v.get_mpz_t(), nbytes, 1, 1, 0, 0, buf.data());
        }
    }
    if (!is) throw std::runtime_error(path + ": truncated cache");
    return t;
}

std::string CountTable::cache_name(long alpha, long max_n, CountMode mode) {
    std::ostringstream os;
    os << "counts_a" << alpha << "_n" << max_n << "_"
       << (mode == CountMode::exact ? "exact" : "logspace") << ".v" << kFormatVersion << ".bin";
    return os.str();
}

LogReal count_constrained(long n, long alpha, CountMode mode) {
    check_n_alpha(n, alpha);
    return CountTable(std::min(alpha, std::max<long>(n, 1)), n, mode).count(n);
}

BigCount count_constrained_exact(long n, long alpha) {
    check_n_alpha(n, alpha);
    return CountTable(std::min(alpha, std::max<long>(n, 1)), n, CountMode::exact).exact_count(n);
}

LogReal z_norm(long n, long alpha) {
    check_n_alpha(n, alpha);
    return CountTable(std::min(alpha, std::max<long>(n, 1)), n, CountMode::logspace).z(n);
}

std::vector<BigCount> exact_perm_counts(long max_n, long j_lo, long j_hi) {
    if (max_n < 0 || j_lo < 1 || j_hi < j_lo) throw std::invalid_argument("bad count range");
    std::vector<BigCount> a(static_cast<std::size_t>(max_n) + 1, BigCount(0));
    a[0] = 1;
    mpz_class ff;
    for (long r = 1; r <= max_n; ++r) {
        mpz_class acc = 0;
        ff = 1;
        long jmax = std::min(r, j_hi);
        for (long j = 1; j <= jmax; ++j) {
            if (j > 1) ff *= (r - j + 1);
            if (j >= j_lo) acc += ff * a[static_cast<std::size_t>(r - j)];
        }
        a[static_cast<std::size_t>(r)] = acc;
    }
    return a;
}

std::vector<double> log_coeff_weighted(const WeightRow& q, long max_n) {
    if (max_n < 0) throw std::invalid_argument("max_n must be >= 0");
    const long alpha = q.alpha();
    std::vector<double> logq(static_cast<std::size_t>(alpha));
    for (long j = 1; j <= alpha; ++j)
        logq[static_cast<std::size_t>(j - 1)] = q.at(j) > 0.0 ? std::log(q.at(j)) : kNegInf;
    std::vector<double> lc(static_cast<std::size_t>(max_n) + 1, kNegInf);
    lc[0] = 0.0;
    for (long r = 1; r <= max_n; ++r) {
        double m = kNegInf, s = 0.0;
        long jmax = std::min(r, alpha);
        for (long j = 1; j <= jmax; ++j) {
            double lq = logq[static_cast<std::size_t>(j - 1)];
            if (lq == kNegInf) continue;
            double t = lq + lc[static_cast<std::size_t>(r - j)];
            if (t == kNegInf) continue;
            if (t <= m) {
                s += std::exp(t - m);
            } else {
                s = s * std::exp(m - t) + 1.0;
                m = t;
            }
        }
        if (s > 0.0)
            lc[static_cast<std::size_t>(r)] = m + std::log(s) - std::log(static_cast<double>(r));
    }
    return lc;
}

LogReal coeff_weighted(long n, const WeightRow& q) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    auto lc = log_coeff_weighted(q, n);
    double v = lc[static_cast<std::size_t>(n)];
    return v == kNegInf ? LogReal::zero() : LogReal::from_log(v);
}

double poisson_sum_pmf(long k, long b1, long b2) {
    if (k < 0) return 0.0;
    return poisson_sum_pmf_table(k, b1, b2)[static_cast<std::size_t>(k)];
}

std::vector<double> poisson_sum_pmf_table(long k_max, long b1, long b2) {
    if (!(0 <= b1 && b1 < b2)) throw std::invalid_argument("need 0 <= b1 < b2");
    double harmonic_tail = 0.0;
    for (long j = b2; j > b1; --j) harmonic_tail += 1.0 / static_cast<double>(j);
    auto lc = log_coeff_weighted(WeightRow::indicator_range(b1 + 1, b2), k_max);
    std::vector<double> pmf(static_cast<std::size_t>(k_max) + 1, 0.0);
    for (long k = 0; k <= k_max; ++k) {
        double lv = lc[static_cast<std::size_t>(k)];
        pmf[static_cast<std::size_t>(k)] = lv == kNegInf ? 0.0 : std::exp(lv - harmonic_tail);
    }
    return pmf;
}

namespace {

// Shared lattice walk for the prefix law: visits every a = (a_1..a_b) with
// sum j*a_j <= n and reports the exact probability as an mpq.
struct PrefixLattice {
    long n, alpha, b;
    std::vector<BigCount> tail;    // permutations with cycle lengths in (b, alpha]
    std::vector<BigCount> full;    // permutations with cycle lengths in [1, alpha]
    std::vector<mpz_class> fact;   // factorials 0..n
    std::size_t max_cells;
    std::size_t cells = 0;

    PrefixLattice(long n_, long alpha_, long b_, std::size_t max_cells_)
        : n(n_), alpha(alpha_), b(b_), max_cells(max_cells_) {
        if (!(1 <= b && b <= alpha && alpha <= n))
            throw std::invalid_argument("need 1 <= b <= alpha <= n");
        tail = (b < alpha) ? exact_perm_counts(n, b + 1, alpha)
                           : std::vector<BigCount>{};  // b == alpha: only the empty remainder
        full = exact_perm_counts(n, 1, alpha);
        fact.resize(static_cast<std::size_t>(n) + 1);
        fact[0] = 1;
        for (long i = 1; i <= n; ++i) fact[static_cast<std::size_t>(i)] = fact[i - 1] * i;
    }

    mpz_class tail_count(long m) const {
        if (b == alpha) return m == 0 ? mpz_class(1) : mpz_class(0);
        return tail[static_cast<std::size_t>(m)];
    }

    template <typename Visit>
    void walk(Visit&& visit) {
        std::vector<long> a(static_cast<std::size_t>(b), 0);
        mpz_class denom = 1;  // prod_j j^{a_j} a_j!
        recurse(1, 0, denom, a, visit);
    }

    template <typename Visit>
    void recurse(long j, long used, mpz_class& denom, std::vector<long>& a, Visit&& visit) {
        if (j > b) {
            if (++cells > max_cells) {
                throw std::length_error("prefix lattice exceeds cell cap of " +
                                        std::to_string(max_cells) + " cells; raise max_cells");
            }
            // P(a) = n!/( (n-r)! * prod j^{a_j} a_j! ) * tail_{n-r} / a_n
            mpz_class num = fact[static_cast<std::size_t>(n)] * tail_count(n - used);
            mpq_class p(num, denom * fact[static_cast<std::size_t>(n - used)] *
                                 full[static_cast<std::size_t>(n)]);
            p.canonicalize();
            visit(a, p);
            return;
        }
        long limit = (n - used) / j;
        mpz_class saved = denom;
        for (long cnt = 0; cnt <= limit; ++cnt) {
            if (cnt > 0) denom *= j * cnt;  // extends j^{a_j} a_j! one step
            a[static_cast<std::size_t>(j - 1)] = cnt;
            recurse(j + 1, used + j * cnt, denom, a, visit);
        }
        a[static_cast<std::size_t>(j - 1)] = 0;
        denom = saved;
    }
};

}  // namespace

double PrefixLaw::total() const {
    std::vector<double> probs;
    probs.reserve(probabilities.size());
    for (auto& [a, p] : probabilities) probs.push_back(p);
    return pairwise_sum(probs);
}

std::vector<double> PrefixLaw::marginal_means() const {
    std::vector<double> means(static_cast<std::size_t>(b), 0.0);
    for (auto& [a, p] : probabilities)
        for (long j = 0; j < b; ++j)
            means[static_cast<std::size_t>(j)] += static_cast<double>(a[static_cast<std::size_t>(j)]) * p;
    return means;
}

PrefixLaw exact_prefix_law(long n, long alpha, long b, std::size_t max_cells) {
    PrefixLattice lattice(n, alpha, b, max_cells);
    PrefixLaw law;
    law.n = n;
    law.alpha = alpha;
    law.b = b;
    mpq_class mass = 0;
    lattice.walk([&](const std::vector<long>& a, const mpq_class& p) {
        mass += p;
        if (p > 0) law.probabilities.emplace(a, p.get_d());
    });
    if (mass != 1) throw std::logic_error("prefix law mass != 1; counting bug");
    return law;
}

double tv_exact(long n, long alpha, long b, std::size_t max_cells) {
    PrefixLattice lattice(n, alpha, b, max_cells);
    // log of prod_j e^{-1/j}: the product-Poisson normalizer
    double harmonic = 0.0;
    for (long j = b; j >= 1; --j) harmonic += 1.0 / static_cast<double>(j);
    double tv = 0.0;
    lattice.walk([&](const std::vector<long>& a, const mpq_class& p) {
        if (p == 0) return;
        double logq = -harmonic;
        for (long j = 1; j <= b; ++j) {
            long cnt = a[static_cast<std::size_t>(j - 1)];
            logq += -static_cast<double>(cnt) * std::log(static_cast<double>(j)) -
                    std::lgamma(static_cast<double>(cnt) + 1.0);
        }
        double diff = p.get_d() - std::exp(logq);
        if (diff > 0.0) tv += diff;
    });
    return tv;
}

}  // namespace cyclecap
