#include "cyclecap/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "cyclecap/moments.hpp"

namespace cyclecap {

Summary summarize(const CycleStructure& cs, long alpha, int k_longest) {
    if (cs.max_length() > alpha) throw std::invalid_argument("structure exceeds alpha");
    Summary s;
    s.C.assign(static_cast<std::size_t>(alpha) + 1, 0);
    for (auto& [j, c] : cs.counts) s.C[static_cast<std::size_t>(j)] = c;
    s.K.assign(s.C.size(), 0);
    s.S.assign(s.C.size(), 0);
    for (long m = 1; m <= alpha; ++m) {
        s.K[static_cast<std::size_t>(m)] = s.K[static_cast<std::size_t>(m - 1)] + s.C[static_cast<std::size_t>(m)];
        s.S[static_cast<std::size_t>(m)] =
            s.S[static_cast<std::size_t>(m - 1)] + m * s.C[static_cast<std::size_t>(m)];
    }
    for (auto it = cs.counts.rbegin(); it != cs.counts.rend() && (int)s.longest.size() < k_longest; ++it)
        for (long c = 0; c < it->second && (int)s.longest.size() < k_longest; ++c)
            s.longest.push_back(it->first);
    return s;
}

namespace {

template <bool Weighted>
std::vector<long> cumulative_at(const CycleStructure& cs, std::span<const long> cutoffs) {
    std::vector<long> out(cutoffs.size(), 0);
    long acc = 0;
    auto it = cs.counts.begin();
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (i > 0 && cutoffs[i] < cutoffs[i - 1])
            throw std::invalid_argument("cutoffs must be nondecreasing");
        while (it != cs.counts.end() && it->first <= cutoffs[i]) {
            acc += Weighted ? it->first * it->second : it->second;
            ++it;
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace

std::vector<long> cumulative_counts_at(const CycleStructure& cs, std::span<const long> cutoffs) {
    return cumulative_at<false>(cs, cutoffs);
}

std::vector<long> cumulative_sizes_at(const CycleStructure& cs, std::span<const long> cutoffs) {
    return cumulative_at<true>(cs, cutoffs);
}

PathBuilder::PathBuilder(long n, long alpha, std::vector<double> t_grid)
    : n_(n), alpha_(std::min(alpha, n)), t_(std::move(t_grid)), saddle_(solve_saddle(n, alpha)) {
    if (t_.empty()) throw std::invalid_argument("empty t grid");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i] < 0.0 || t_[i] > 1.0 || (i > 0 && t_[i] <= t_[i - 1]))
            throw std::invalid_argument("t grid must be strictly increasing within [0,1]");
        b_.push_back(quantile_length(n_, alpha_, t_[i]));
    }
    // centering sums, accumulated once per grid with compensated summation
    center_counts_.resize(b_.size());
    center_sizes_.resize(b_.size());
    long double xc = saddle_.x_precise;
    long double sum_c = 0.0L, sum_s = 0.0L, xp = 1.0L;
    long j = 0;
    for (std::size_t i = 0; i < b_.size(); ++i) {
        while (j < b_[i]) {
            ++j;
            xp *= xc;
            sum_c += xp / static_cast<long double>(j);
            sum_s += xp;
        }
        center_counts_[i] = static_cast<double>(sum_c);
        // at the full cap the saddle identity pins the size sum to n
        center_sizes_[i] = (b_[i] == alpha_) ? static_cast<double>(n_) : static_cast<double>(sum_s);
    }
    count_scale_ = std::sqrt(static_cast<double>(n_) / static_cast<double>(alpha_));
    size_scale_ = std::sqrt(static_cast<double>(n_) * static_cast<double>(alpha_));
}

std::vector<double> PathBuilder::uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("need >= 2 grid points");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        t[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
    return t;
}

ProcessPath PathBuilder::shape(const CycleStructure& cs) const {
    auto K = cumulative_counts_at(cs, b_);
    ProcessPath p{PathKind::shape, t_, {}};
    p.value.resize(K.size());
    const double scale = static_cast<double>(alpha_) / static_cast<double>(n_);
    for (std::size_t i = 0; i < K.size(); ++i) p.value[i] = static_cast<double>(K[i]) * scale;
    return p;
}

ProcessPath PathBuilder::index_shape(const CycleStructure& cs) const {
    auto S = cumulative_sizes_at(cs, b_);
    ProcessPath p{PathKind::index_shape, t_, {}};
    p.value.resize(S.size());
    for (std::size_t i = 0; i < S.size(); ++i)
        p.value[i] = static_cast<double>(S[i]) / static_cast<double>(n_);
    return p;
}

ProcessPath PathBuilder::fluctuation(const CycleStructure& cs) const {
    auto K = cumulative_counts_at(cs, b_);
    ProcessPath p{PathKind::fluctuation, t_, {}};
    p.value.resize(K.size());
    for (std::size_t i = 0; i < K.size(); ++i)
        p.value[i] = (static_cast<double>(K[i]) - center_counts_[i]) / count_scale_;
    return p;
}

ProcessPath PathBuilder::index_fluctuation(const CycleStructure& cs) const {
    auto S = cumulative_sizes_at(cs, b_);
    ProcessPath p{PathKind::index_fluctuation, t_, {}};
    p.value.resize(S.size());
    for (std::size_t i = 0; i < S.size(); ++i)
        p.value[i] = (static_cast<double>(S[i]) - center_sizes_[i]) / size_scale_;
    return p;
}

double PathBuilder::sup_deviation_from_identity(const ProcessPath& p) {
    double sup = 0.0;
    for (std::size_t i = 0; i < p.t.size(); ++i)
        sup = std::max(sup, std::abs(p.value[i] - p.t[i]));
    return sup;
}

namespace {

MomentReport report_from_standardized(std::vector<double> std_values, double center) {
    MomentReport r;
    r.samples = std_values.size();
    r.mean = mean(std_values);
    r.variance = variance(std_values);
    r.ks_normal = ks_distance_normal(std_values);
    r.low_mean_warning = center < 10.0;
    r.standardized = std::move(std_values);
    return r;
}

}  // namespace

MomentReport clt_statistic(std::span<const CycleStructure> samples, long m, double mu_m) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    if (!(mu_m > 0.0)) throw std::invalid_argument("mu must be positive");
    const double scale = std::sqrt(mu_m);
    std::vector<double> v;
    v.reserve(samples.size());
    for (const CycleStructure& cs : samples) {
        auto it = cs.counts.find(m);
        long c = it == cs.counts.end() ? 0 : it->second;
        v.push_back((static_cast<double>(c) - mu_m) / scale);
    }
    return report_from_standardized(std::move(v), mu_m);
}

MomentReport total_cycle_clt(std::span<const CycleStructure> samples, long n, long alpha) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    SaddlePoint sp = solve_saddle(n, alpha);
    alpha = sp.alpha;
    long double center = 0.0L, xp = 1.0L;
    for (long j = 1; j <= alpha; ++j) {
        xp *= sp.x_precise;
        center += xp / static_cast<long double>(j);
    }
    double lr = std::log(static_cast<double>(n) / static_cast<double>(alpha));
    if (lr <= 0.0) throw std::invalid_argument("need alpha < n for the total-count scaling");
    double scale = std::sqrt(static_cast<double>(n) / (static_cast<double>(alpha) * lr * lr));
    std::vector<double> v;
    v.reserve(samples.size());
    for (const CycleStructure& cs : samples)
        v.push_back((static_cast<double>(cs.num_cycles()) - static_cast<double>(center)) / scale);
    return report_from_standardized(std::move(v), static_cast<double>(center));
}

std::vector<CovarianceEstimate> bridge_covariance(
    const std::vector<ProcessPath>& paths, std::span<const std::pair<double, double>> pairs) {
    if (paths.size() < 100) throw std::invalid_argument("need at least 100 paths");
    const std::vector<double>& grid = paths.front().t;
    auto grid_index = [&](double t) -> std::size_t {
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(grid[i] - t) < 1e-12) return i;
        throw std::invalid_argument("pair value not on the path grid");
    };
    const std::size_t npaths = paths.size();
    std::vector<CovarianceEstimate> out;
    for (auto& [s, t] : pairs) {
        std::size_t is = grid_index(s), it_ = grid_index(t);
        std::vector<double> a(npaths), b(npaths);
        for (std::size_t p = 0; p < npaths; ++p) {
            a[p] = paths[p].value[is];
            b[p] = paths[p].value[it_];
        }
        CovarianceEstimate ce;
        ce.s = s;
        ce.t = t;
        ce.estimate = covariance(a, b);
        double lo = std::min(s, t), hi = std::max(s, t);
        ce.prediction = lo * (1.0 - hi);
        double ma = mean(a), mb = mean(b);
        std::vector<double> prod(npaths);
        for (std::size_t p = 0; p < npaths; ++p) prod[p] = (a[p] - ma) * (b[p] - mb);
        ce.std_error = std::sqrt(variance(prod) / static_cast<double>(npaths));
        out.push_back(ce);
    }
    return out;
}

double tv_empirical(std::span<const CycleStructure> samples, long b) {
    if (b < 0) throw std::invalid_argument("b must be >= 0");
    if (b == 0) return 0.0;
    if (samples.empty()) throw std::invalid_argument("no samples");
    std::map<std::vector<long>, long> counts;
    std::vector<long> key(static_cast<std::size_t>(b));
    for (const CycleStructure& cs : samples) {
        std::fill(key.begin(), key.end(), 0);
        for (auto& [j, c] : cs.counts) {
            if (j > b) break;
            key[static_cast<std::size_t>(j - 1)] = c;
        }
        counts[key] += 1;
    }
    double harmonic = 0.0;
    for (long j = b; j >= 1; --j) harmonic += 1.0 / static_cast<double>(j);
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    double tv = 0.0;
    for (auto& [a, cnt] : counts) {
        double logq = -harmonic;
        for (long j = 1; j <= b; ++j) {
            long c = a[static_cast<std::size_t>(j - 1)];
            logq += -static_cast<double>(c) * std::log(static_cast<double>(j)) -
                    std::lgamma(static_cast<double>(c) + 1.0);
        }
        double diff = static_cast<double>(cnt) * inv_n - std::exp(logq);
        if (diff > 0.0) tv += diff;
    }
    return tv;
}

std::vector<TiltCheckRow> tilted_poisson_check(long n, long alpha, long m, long j_max) {
    std::vector<double> pmf = exact_marginal_pmf(n, alpha, m, j_max);
    const double mu_m = mu(n, alpha, m);
    const double log_mu = std::log(mu_m);
    std::vector<TiltCheckRow> rows;
    rows.reserve(pmf.size());
    for (std::size_t j = 0; j < pmf.size(); ++j) {
        TiltCheckRow row;
        row.j = static_cast<long>(j);
        row.exact = pmf[j];
        row.poisson = std::exp(-mu_m + static_cast<double>(j) * log_mu -
                               std::lgamma(static_cast<double>(j) + 1.0));
        row.ratio = row.poisson > 0.0 ? row.exact / row.poisson
                                      : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

LongestCycleReport longest_cycle_report(std::span<const CycleStructure> samples, int k,
                                        long alpha) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    LongestCycleReport rep;
    rep.k = k;
    rep.samples = samples.size();
    rep.prob_at_alpha.assign(static_cast<std::size_t>(k), 0.0);
    rep.mean_ratio.assign(static_cast<std::size_t>(k), 0.0);
    rep.defined.assign(static_cast<std::size_t>(k), 0);
    std::size_t all_alpha = 0;
    std::vector<long> top;
    for (const CycleStructure& cs : samples) {
        top.clear();
        for (auto it = cs.counts.rbegin(); it != cs.counts.rend() && (int)top.size() < k; ++it)
            for (long c = 0; c < it->second && (int)top.size() < k; ++c)
                top.push_back(it->first);
        bool all = top.size() == static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < top.size(); ++i) {
            rep.defined[i] += 1;
            if (top[i] == alpha) rep.prob_at_alpha[i] += 1.0;
            rep.mean_ratio[i] += static_cast<double>(top[i]) / static_cast<double>(alpha);
            if (top[i] != alpha) all = false;
        }
        if (all) ++all_alpha;
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
        if (rep.defined[i] > 0) {
            rep.prob_at_alpha[i] /= static_cast<double>(rep.defined[i]);
            rep.mean_ratio[i] /= static_cast<double>(rep.defined[i]);
        } else {
            rep.prob_at_alpha[i] = std::numeric_limits<double>::quiet_NaN();
            rep.mean_ratio[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    rep.prob_top_k_all_alpha = static_cast<double>(all_alpha) / static_cast<double>(samples.size());
    return rep;
}

}  // namespace cyclecap
