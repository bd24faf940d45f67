// Acceptance suite: one line per criterion, pass or fail, with the measured
// numbers. Exit code is the number of failed criteria.
//
// Criteria 3, 7b, 8a, 9a, 9b and 10 check asymptotic statements at fixed
// desk-scale configurations. The exact finite-n moments (computable from the
// count tables, see moments.hpp) show that those four converge only at
// 1/log(n/alpha) or slower, so at these n they measurably miss their
// thresholds; the checks are implemented as stated and report honestly
// rather than being tuned to pass. Details alongside each criterion below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "cyclecap/asymptotics.hpp"
#include "cyclecap/counts.hpp"
#include "cyclecap/moments.hpp"
#include "cyclecap/sampler.hpp"
#include "cyclecap/statistics.hpp"
#include "cyclecap/stats_util.hpp"

using namespace cyclecap;

namespace {

int g_failed = 0;
int g_passed = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    (ok ? g_passed : g_failed) += 1;
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---- 1: exact counting --------------------------------------------------
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    int configs = 0;
    for (int n = 0; n <= 8 && ok; ++n)
        for (int alpha = 1; alpha <= std::max(n, 1); ++alpha, ++configs)
            ok = ok && count_constrained_exact(n, alpha) == brute::count_constrained(n, alpha);
    ok = ok && count_constrained_exact(5, 2) == 26;
    report("1", ok,
           "count_constrained equals brute-force enumeration over S_n, n <= 8 (" +
               std::to_string(configs) + " configs, includes count(5,2)=26), " +
               fmt(elapsed_s(t0)) + " s");
}

// ---- 2: saddle solver ----------------------------------------------------
void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string worst;
    for (double logn = 1.0; logn <= 7.0; logn += 1.0) {
        long n = static_cast<long>(std::llround(std::pow(10.0, logn)));
        for (double beta : {0.2, 0.5, 0.8}) {
            long alpha =
                std::max<long>(1, static_cast<long>(std::pow(static_cast<double>(n), beta)));
            SaddlePoint sp = solve_saddle(n, alpha);
            bool here = sp.residual <= 1e-12 * static_cast<double>(n);
            if (alpha < n) {
                double a = static_cast<double>(alpha), nn = static_cast<double>(n);
                here = here && sp.x >= std::pow(nn / a, 1.0 / a) * (1 - 1e-12) &&
                       sp.x <= std::pow(nn, 1.0 / a) * (1 + 1e-12);
            }
            if (!here) worst = "n=" + std::to_string(n) + " alpha=" + std::to_string(alpha);
            ok = ok && here;
        }
        ok = ok && solve_saddle(n, n).x == 1.0;
    }
    double dt = elapsed_s(t0);
    ok = ok && dt < 5.0;
    report("2", ok,
           "saddle residual <= 1e-12*n and bracket on n in {10..1e7} x beta in {.2,.5,.8}; "
           "x = 1 exactly at alpha = n; " +
               fmt(dt) + " s" + (worst.empty() ? "" : " (first violation at " + worst + ")"));
}

// ---- 3: saddle log asymptotics trend -------------------------------------
void criterion_3() {
    // Known finite-n behavior: the deviation peaks near n = 1e4 before the
    // asymptotic decay sets in (pre-asymptotic bump), so the strict decrease
    // over this grid fails at the first step. Reported as measured.
    std::vector<double> errs;
    std::string seq;
    for (long n : {1000L, 10000L, 100000L, 1000000L}) {
        long alpha = static_cast<long>(std::sqrt(static_cast<double>(n)));
        SaddlePoint sp = solve_saddle(n, alpha);
        double ratio = static_cast<double>(n) / static_cast<double>(alpha);
        double err = std::abs(static_cast<double>(alpha) * sp.log_x() -
                              std::log(ratio * std::log(ratio)));
        errs.push_back(err);
        seq += (seq.empty() ? "" : " -> ") + fmt(err);
    }
    bool ok = true;
    for (std::size_t i = 1; i < errs.size(); ++i) ok = ok && errs[i] < errs[i - 1];
    report("3", ok,
           "|alpha log x - log((n/a)log(n/a))| strictly decreasing over n = 1e3..1e6, "
           "alpha = floor(sqrt n): measured " + seq);
}

// ---- 4: saddle-point estimate and quadrature ------------------------------
void criterion_4() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string details;
    double prev = 1e9;
    for (long n : {100L, 400L, 1600L}) {
        long alpha = static_cast<long>(std::sqrt(static_cast<double>(n)));
        CountTable table(alpha, n, CountMode::exact);
        CoeffEstimate est = coeff_estimate(FunctionSpec::one(), WeightRow::unit(alpha), n);
        double rel = est.value.rel_diff(table.z(n));
        ok = ok && rel < prev && rel <= 4.0 * est.claimed_rel_error;
        prev = rel;
        details += (details.empty() ? "rel_err " : " -> ") + fmt(rel);
    }
    for (long n : {60L, 150L, 300L}) {
        long alpha = static_cast<long>(std::sqrt(static_cast<double>(n)));
        CountTable table(alpha, n, CountMode::exact);
        QuadratureResult q = coeff_quadrature(FunctionSpec::one(), WeightRow::unit(alpha), n);
        ok = ok && q.converged && q.value.rel_diff(table.z(n)) < 1e-8;
    }
    double dt = elapsed_s(t0);
    ok = ok && dt < 30.0;
    report("4", ok,
           "estimate error decreasing and within 4x claim (" + details +
               "); quadrature matches exact to 1e-8 up to n = 300; " + fmt(dt) + " s");
}

// ---- 5: sampler exactness -------------------------------------------------
void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    const int n = 8, alpha = 3;
    const long N = 1000000;
    auto law = brute::cycle_type_counts(n, alpha);
    double total = 0;
    for (auto& [t, c] : law) total += static_cast<double>(c);

    auto chi2_of = [&](const std::vector<CycleStructure>& samples) {
        std::map<std::map<long, long>, long> observed;
        for (auto& cs : samples) observed[cs.counts] += 1;
        std::vector<long> obs;
        std::vector<double> expct;
        for (auto& [t, c] : law) {
            auto it = observed.find(t);
            obs.push_back(it == observed.end() ? 0 : it->second);
            expct.push_back(static_cast<double>(samples.size()) * static_cast<double>(c) / total);
        }
        return pearson_chi2(obs, expct);
    };

    SamplerConfig cfg;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.seed = 20240801;
    cfg.batch = N;
    cfg.threads = 8;
    cfg.method = SampleMethod::recursive;
    auto rec = sample_batch(cfg);
    auto chi_rec = chi2_of(rec);

    cfg.method = SampleMethod::rejection;
    cfg.seed = 20240802;
    auto rej = sample_batch(cfg);
    auto chi_rej = chi2_of(rej);

    std::map<std::map<long, long>, std::pair<long, long>> cells;
    for (auto& cs : rec) cells[cs.counts].first += 1;
    for (auto& cs : rej) cells[cs.counts].second += 1;
    std::vector<long> a, b;
    for (auto& [t, c] : cells) {
        a.push_back(c.first);
        b.push_back(c.second);
    }
    auto twosample = two_sample_chi2(a, b);

    double dt = elapsed_s(t0);
    bool ok = chi_rec.p_value > 1e-3 && chi_rej.p_value > 1e-3 && twosample.p_value > 1e-3 &&
              dt < 60.0;
    report("5", ok,
           "1e6-sample chi-square at (n=8, alpha=3): recursive p=" + fmt(chi_rec.p_value) +
               ", rejection p=" + fmt(chi_rej.p_value) +
               ", two-sample p=" + fmt(twosample.p_value) + "; " + fmt(dt) + " s");
}

// ---- 6: total variation trend ---------------------------------------------
void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double prev = 1e9, last = 0;
    std::string seq;
    for (long n : {50L, 100L, 200L, 400L}) {
        long alpha = static_cast<long>(std::sqrt(static_cast<double>(n)));
        double tv = tv_exact(n, alpha, 2);
        ok = ok && tv < prev;
        prev = tv;
        last = tv;
        seq += (seq.empty() ? "" : " -> ") + fmt(tv);
    }
    ok = ok && last <= 0.5;
    report("6", ok,
           "tv_exact(n, floor(sqrt n), b=2) decreasing over n = 50..400 and <= 0.5 at 400: " +
               seq + "; " + fmt(elapsed_s(t0)) + " s");
}

// ---- 7: cycle-count normal fluctuations ------------------------------------
void criterion_7() {
    auto t0 = std::chrono::steady_clock::now();
    const long n = 10000, alpha = 22, N = 10000;
    auto table = std::make_shared<CountTable>(alpha, n, CountMode::logspace);
    SamplerConfig cfg;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.seed = 7001;
    cfg.batch = N;
    cfg.threads = 8;
    auto samples = sample_batch(cfg, table);
    MomentReport top = clt_statistic(samples, alpha, mu(n, alpha, alpha));
    MomentReport next = clt_statistic(samples, alpha - 1, mu(n, alpha, alpha - 1));
    double corr = correlation(top.standardized, next.standardized);
    double dt = elapsed_s(t0);

    report("7a", top.ks_normal <= 0.1,
           "KS(standardized C_alpha, normal) = " + fmt(top.ks_normal) +
               " <= 0.1 at n=1e4, alpha=22, 1e4 samples; " + fmt(dt) + " s");
    // The exact finite-n correlation between standardized C_22 and C_21 at
    // this scale is -0.39 (conditioning on sum j C_j = n couples the large
    // counts; it decays like log(n) * n^{-1/3}), so +-0.05 is out of reach
    // here by two orders of scale in n.
    report("7b", std::abs(corr) <= 0.05,
           "|corr(std C_alpha, std C_{alpha-1})| = " + fmt(std::abs(corr)) + " <= 0.05");
}

// ---- 8, 9, 10: shape, bridge, total-count CLT at the shared config ----------
void criteria_8_9_10() {
    auto t0 = std::chrono::steady_clock::now();
    const long n = 100000;
    const long alpha = static_cast<long>(std::pow(static_cast<double>(n), 0.6));  // 1000
    const long N_bridge = 10000, N_shape = 1000;
    auto table = std::make_shared<CountTable>(alpha, n, CountMode::logspace);
    SamplerConfig cfg;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.seed = 90210;
    cfg.batch = N_bridge;
    cfg.threads = 8;
    auto samples = sample_batch(cfg, table);
    double dt_sataples = elapsed_s(t0);

    PathBuilder pb(n, alpha, PathBuilder::uniform_grid(101));

    // criterion 8: sup deviation of the shape paths (first 1000 samples)
    long exceed_K = 0, exceed_S = 0;
    for (long i = 0; i < N_shape; ++i) {
        const CycleStructure& cs = samples[static_cast<std::size_t>(i)];
        if (PathBuilder::sup_deviation_from_identity(pb.shape(cs)) > 0.25) ++exceed_K;
        if (PathBuilder::sup_deviation_from_identity(pb.index_shape(cs)) > 0.25) ++exceed_S;
    }
    double pK = static_cast<double>(exceed_K) / N_shape;
    double pS = static_cast<double>(exceed_S) / N_shape;
    // The K-path cannot meet this at n = 1e5: its deterministic centering
    // already deviates by sup_t |E K_{b_t}/(n/alpha) - t| = 0.30 > 0.25
    // (E K_alpha = 1.30 n/alpha at this scale; the excess decays like
    // 1/log(n/alpha)). The index path is pinned at both endpoints and passes.
    report("8a", pK <= 0.1,
           "P[sup_t |K_{b_t}/(n/alpha) - t| > 0.25] = " + fmt(pK) +
               " <= 0.1 at n=1e5, alpha=1000, 1e3 samples");
    report("8b", pS <= 0.1,
           "index variant: P[sup_t |S_{b_t}/n - t| > 0.25] = " + fmt(pS) + " <= 0.1");

    // criterion 9: bridge fluctuation variance/covariance at fixed times
    std::vector<double> L25, L50, L75;
    L25.reserve(samples.size());
    L50.reserve(samples.size());
    L75.reserve(samples.size());
    bool index_t1_zero = true;
    for (auto& cs : samples) {
        ProcessPath L = pb.fluctuation(cs);
        L25.push_back(L.value[25]);
        L50.push_back(L.value[50]);
        L75.push_back(L.value[75]);
        index_t1_zero = index_t1_zero && pb.index_fluctuation(cs).value.back() == 0.0;
    }
    double v50 = variance(L50);
    double c2575 = covariance(L25, L75);
    // Exact finite-n values at this configuration: Var(L_.5) = 0.468,
    // Cov(L_.25, L_.75) = 0.212 (conditioning inflates the bridge by a
    // 1/log(n/alpha) factor: reaching 0.25 +- 0.05 needs log(n/alpha) ~ 18,
    // i.e. n beyond 1e19 at alpha = n^0.6). Measured values land there.
    report("9a", v50 >= 0.20 && v50 <= 0.30,
           "Var(L_0.5) = " + fmt(v50) + " in 0.25 +- 0.05 (1e4 samples)");
    report("9b", c2575 >= 0.0325 && c2575 <= 0.0925,
           "Cov(L_0.25, L_0.75) = " + fmt(c2575) + " in 0.0625 +- 0.03");
    report("9c", index_t1_zero,
           "index fluctuation at t = 1 vanishes exactly for every sample");

    // criterion 10: total-count CLT scaling
    MomentReport total = total_cycle_clt(samples, n, alpha);
    // Exact Var(K_alpha) is 2.58x the asymptotic scale n/(alpha log^2(n/alpha))
    // at this n (ratio -> 1 like (1 + c/log n)^2), which alone puts the KS
    // near 0.11.
    report("10", total.ks_normal <= 0.1,
           "KS(standardized K_alpha, normal) = " + fmt(total.ks_normal) + " <= 0.1; batch+paths " +
               fmt(elapsed_s(t0)) + " s (sampling " + fmt(dt_sataples) + " s)");
}

// ---- 11: longest cycles -----------------------------------------------------
void criterion_11() {
    auto t0 = std::chrono::steady_clock::now();
    const long n = 10000, alpha = 22, N = 1000;
    auto table = std::make_shared<CountTable>(alpha, n, CountMode::logspace);
    SamplerConfig cfg;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.seed = 1111;
    cfg.batch = N;
    cfg.threads = 8;
    auto samples = sample_batch(cfg, table);
    auto rep = longest_cycle_report(samples, 3, alpha);
    bool ok = rep.prob_top_k_all_alpha >= 0.9;
    report("11", ok,
           "P[(l1,l2,l3) = (alpha,alpha,alpha)] = " + fmt(rep.prob_top_k_all_alpha) +
               " >= 0.9 at n=1e4, alpha=22, 1e3 samples; " + fmt(elapsed_s(t0)) + " s");
}

// ---- 12: determinism ----------------------------------------------------------
void criterion_12() {
    auto t0 = std::chrono::steady_clock::now();
    SamplerConfig cfg;
    cfg.n = 4000;
    cfg.alpha = 120;
    cfg.seed = 424242;
    cfg.batch = 500;
    cfg.threads = 1;
    auto serialize = [](const std::vector<CycleStructure>& v) {
        std::string s;
        for (auto& cs : v) {
            s += cs.to_record();
            s += '\n';
        }
        return s;
    };
    auto one = serialize(sample_batch(cfg));
    cfg.threads = 7;
    auto seven = serialize(sample_batch(cfg));
    cfg.threads = 3;
    auto three = serialize(sample_batch(cfg));
    bool ok = one == seven && one == three;
    // rejection path determinism as well
    cfg.n = 40;
    cfg.alpha = 8;
    cfg.method = SampleMethod::rejection;
    cfg.threads = 1;
    auto r1 = serialize(sample_batch(cfg));
    cfg.threads = 6;
    auto r2 = serialize(sample_batch(cfg));
    ok = ok && r1 == r2;
    report("12", ok,
           "seeded batches byte-identical across thread counts (recursive and rejection); " +
               fmt(elapsed_s(t0)) + " s");
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criteria_8_9_10();
    criterion_11();
    criterion_12();
    std::printf("----\n%d checks passed, %d failed, total %.1f s\n", g_passed, g_failed,
                elapsed_s(t0));
    if (g_failed > 0)
        std::printf("failing checks probe asymptotic limits at desk-scale n where the exact\n"
                    "finite-n moments sit measurably away from their limits; see the comments\n"
                    "in tests/acceptance.cpp.\n");
    return g_failed;
}
