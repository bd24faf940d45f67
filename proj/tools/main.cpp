// cyclecap: exact and asymptotic computation with uniform random
// permutations whose cycles are capped at length alpha.
//
// Subcommands wire the library to plot-ready CSV/JSON. Every randomized
// experiment requires an explicit --seed, and re-running from the emitted
// manifest reproduces all outputs byte for byte.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "cyclecap/asymptotics.hpp"
#include "cyclecap/counts.hpp"
#include "cyclecap/moments.hpp"
#include "cyclecap/report_io.hpp"
#include "cyclecap/saddle.hpp"
#include "cyclecap/sampler.hpp"
#include "cyclecap/statistics.hpp"
#include "cyclecap/stats_util.hpp"

namespace fs = std::filesystem;
using namespace cyclecap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

// alpha given either as a plain integer or as a rule "pow:beta" -> floor(n^beta)
struct AlphaRule {
    bool is_pow = false;
    double beta = 0.0;
    long fixed = 0;

    long resolve(long n) const {
        long a = is_pow ? static_cast<long>(std::pow(static_cast<double>(n), beta)) : fixed;
        return std::max<long>(1, std::min(a, n));
    }
    std::string str() const {
        return is_pow ? "pow:" + std::to_string(beta) : std::to_string(fixed);
    }
};

AlphaRule parse_alpha(const std::string& s) {
    AlphaRule r;
    if (s.rfind("pow:", 0) == 0) {
        r.is_pow = true;
        r.beta = std::stod(s.substr(4));
        if (!(r.beta > 0.0) || r.beta > 1.0)
            throw CLI::ValidationError("--alpha: pow exponent must be in (0, 1]");
    } else {
        r.fixed = std::stol(s);
        if (r.fixed < 1) throw CLI::ValidationError("--alpha: alpha must be >= 1");
    }
    return r;
}

std::vector<long> parse_grid(const std::string& s) {
    std::vector<long> grid;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(std::stol(tok));
    if (grid.empty()) throw CLI::ValidationError("--n-grid: empty grid");
    return grid;
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& s) {
    std::vector<std::pair<double, double>> pairs;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--pairs: expected s:t pairs");
        pairs.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
    }
    return pairs;
}

// Count tables for recursive sampling, cached on disk when CYCLECAP_CACHE_DIR
// is set. Cache corruption falls back to a rebuild.
std::shared_ptr<CountTable> acquire_table(long alpha, long n) {
    CountMode mode = n <= 2000 ? CountMode::exact : CountMode::logspace;
    const char* dir = std::getenv("CYCLECAP_CACHE_DIR");
    if (dir != nullptr && *dir != '\0') {
        fs::path p = fs::path(dir) / CountTable::cache_name(alpha, n, mode);
        if (fs::exists(p)) {
            try {
                return std::make_shared<CountTable>(CountTable::load(p.string()));
            } catch (const std::exception& e) {
                std::cerr << "cache " << p << " unreadable (" << e.what() << "), rebuilding\n";
            }
        }
        auto table = std::make_shared<CountTable>(alpha, n, mode);
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        try {
            table->save(p.string());
        } catch (const std::exception& e) {
            std::cerr << "cache write failed: " << e.what() << "\n";
        }
        return table;
    }
    return std::make_shared<CountTable>(alpha, n, mode);
}

// scientific string for a LogReal that may exceed double range
std::string logreal_sci(const LogReal& v) {
    if (v.is_zero()) return "0";
    double log10v = v.log_magnitude / M_LN10;
    double e = std::floor(log10v);
    double mant = std::pow(10.0, log10v - e);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12fe%+d", mant, static_cast<int>(e));
    return buf;
}

struct Output {
    std::string path;  // empty: stdout

    void emit(const CsvTable& table, const nlohmann::json& manifest) const {
        if (path.empty()) {
            std::cout << table.to_string();
            return;
        }
        write_csv(table, path);
        write_manifest(manifest, manifest_path_for(path));
    }
    void emit_text(const std::string& body, const nlohmann::json& manifest) const {
        if (path.empty()) {
            std::cout << body;
            return;
        }
        write_text(body, path);
        write_manifest(manifest, manifest_path_for(path));
    }
};

int run(const std::vector<std::string>& args, bool allow_rerun = true);

int cmd_rerun(const std::string& manifest_path) {
    nlohmann::json m = read_manifest(manifest_path);
    if (!m.contains("argv") || !m["argv"].is_array())
        throw std::runtime_error("manifest has no argv to replay");
    std::vector<std::string> args;
    for (auto& a : m["argv"]) args.push_back(a.get<std::string>());
    std::cerr << "replaying:";
    for (auto& a : args) std::cerr << ' ' << a;
    std::cerr << '\n';
    return run(args, /*allow_rerun=*/false);
}

int run(const std::vector<std::string>& args, bool allow_rerun) {
    CLI::App app{"exact counting, sampling and limit-theorem experiments for uniform random "
                 "permutations with cycle lengths capped at alpha"};
    app.require_subcommand(1);

    // ---- count ----------------------------------------------------------
    auto* count_cmd = app.add_subcommand(
        "count", "number of permutations of n elements with all cycles of length <= alpha");
    long count_n = 0;
    std::string count_alpha;
    std::string count_mode = "auto";
    count_cmd->add_option("n", count_n, "permutation length")->required();
    count_cmd->add_option("alpha", count_alpha, "cycle cap (integer or pow:beta)")->required();
    count_cmd->add_option("--mode", count_mode, "exact | logspace | auto (exact up to n=2000)")
        ->check(CLI::IsMember({"exact", "logspace", "auto"}));

    // ---- saddle ---------------------------------------------------------
    auto* saddle_cmd = app.add_subcommand(
        "saddle", "solve n = sum_{j<=alpha} x^j, the saddle point driving the asymptotics");
    long saddle_n = 0;
    std::string saddle_alpha;
    bool saddle_moments = false;
    saddle_cmd->add_option("n", saddle_n, "permutation length")->required();
    saddle_cmd->add_option("alpha", saddle_alpha, "cycle cap (integer or pow:beta)")->required();
    saddle_cmd->add_flag("--moments", saddle_moments, "also print lambda_0..lambda_4");

    // ---- sample ---------------------------------------------------------
    auto* sample_cmd = app.add_subcommand(
        "sample", "exact samples of the cycle type under the capped-cycle uniform measure");
    long sample_n = 0;
    std::string sample_alpha;
    long sample_count = 1;
    std::uint64_t sample_seed = 0;
    std::string sample_method = "recursive";
    double sample_tilt = 0.0;
    int sample_threads = 1;
    std::string sample_out;
    sample_cmd->add_option("n", sample_n, "permutation length")->required();
    sample_cmd->add_option("alpha", sample_alpha, "cycle cap (integer or pow:beta)")->required();
    sample_cmd->add_option("--samples", sample_count, "batch size")->required();
    sample_cmd->add_option("--seed", sample_seed, "rng seed (explicit for reproducibility)")
        ->required();
    sample_cmd->add_option("--method", sample_method, "recursive | rejection")
        ->check(CLI::IsMember({"recursive", "rejection"}));
    sample_cmd->add_option("--tilt", sample_tilt,
                           "rejection tilt (> 0; default: the saddle point x)");
    sample_cmd->add_option("--threads", sample_threads, "worker threads (output is identical)");
    sample_cmd->add_option("-o,--output", sample_out, "write records here (plus manifest)");
    sample_cmd->set_config("--config");

    // ---- verify-asymptotics ----------------------------------------------
    auto* verify_cmd = app.add_subcommand(
        "verify-asymptotics",
        "saddle-point estimate and contour quadrature of Z_{n,alpha} against exact counts");
    std::string verify_grid = "100,400,1600";
    std::string verify_alpha = "pow:0.5";
    std::string verify_out;
    verify_cmd->add_option("--n-grid", verify_grid, "comma-separated n values");
    verify_cmd->add_option("--alpha", verify_alpha, "cycle cap (integer or pow:beta)");
    verify_cmd->add_option("-o,--output", verify_out, "CSV path (stdout if omitted)");
    verify_cmd->set_config("--config");

    // ---- experiment -------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo and exact-law experiments");
    exp_cmd->require_subcommand(1);

    auto* tv_cmd = exp_cmd->add_subcommand(
        "poisson-tv",
        "total variation between short-cycle counts (C_1..C_b) and independent Poisson(1/j)");
    std::string tv_grid = "50,100,200,400";
    std::string tv_alpha = "pow:0.5";
    long tv_b = 2;
    long tv_samples = 0;
    std::uint64_t tv_seed = 0;
    std::string tv_out;
    int tv_threads = 1;
    tv_cmd->add_option("--n-grid", tv_grid, "comma-separated n values");
    tv_cmd->add_option("--alpha", tv_alpha, "cycle cap (integer or pow:beta)");
    tv_cmd->add_option("--b", tv_b, "prefix length");
    tv_cmd->add_option("--samples", tv_samples,
                       "add an empirical TV column from this many draws per n");
    tv_cmd->add_option("--seed", tv_seed, "rng seed (required with --samples)");
    tv_cmd->add_option("--threads", tv_threads, "worker threads");
    tv_cmd->add_option("-o,--output", tv_out, "CSV path");
    tv_cmd->set_config("--config");

    auto* clt_cmd = exp_cmd->add_subcommand(
        "clt", "normal fluctuations of single cycle counts: (C_m - mu_m)/sqrt(mu_m)");
    long clt_n = 10000;
    std::string clt_alpha = "22";
    std::string clt_m = "22,21";
    long clt_samples = 10000;
    std::uint64_t clt_seed = 0;
    int clt_threads = 1;
    std::string clt_out;
    clt_cmd->add_option("--n", clt_n, "permutation length");
    clt_cmd->add_option("--alpha", clt_alpha, "cycle cap (integer or pow:beta)");
    clt_cmd->add_option("--m", clt_m, "comma-separated cycle lengths");
    clt_cmd->add_option("--samples", clt_samples, "batch size");
    clt_cmd->add_option("--seed", clt_seed, "rng seed")->required();
    clt_cmd->add_option("--threads", clt_threads, "worker threads");
    clt_cmd->add_option("-o,--output", clt_out, "CSV path (correlations land in *_corr.csv)");
    clt_cmd->set_config("--config");

    auto* shape_cmd = exp_cmd->add_subcommand(
        "shape", "limit shape of cumulative cycle counts: K_{b_t}/(n/alpha) and S_{b_t}/n vs t");
    long shape_n = 100000;
    std::string shape_alpha = "pow:0.6";
    long shape_samples = 1000;
    std::uint64_t shape_seed = 0;
    int shape_grid_points = 101;
    double shape_threshold = 0.25;
    int shape_threads = 1;
    std::string shape_out;
    shape_cmd->add_option("--n", shape_n, "permutation length");
    shape_cmd->add_option("--alpha", shape_alpha, "cycle cap (integer or pow:beta)");
    shape_cmd->add_option("--samples", shape_samples, "batch size");
    shape_cmd->add_option("--seed", shape_seed, "rng seed")->required();
    shape_cmd->add_option("--t-grid", shape_grid_points, "uniform grid points on [0,1]");
    shape_cmd->add_option("--threshold", shape_threshold, "sup-deviation exceedance threshold");
    shape_cmd->add_option("--threads", shape_threads, "worker threads");
    shape_cmd->add_option("-o,--output", shape_out, "CSV path");
    shape_cmd->set_config("--config");

    auto* bridge_cmd = exp_cmd->add_subcommand(
        "bridge",
        "Brownian-bridge fluctuations of K_{b_t} around its centering; covariance s(1-t)");
    long bridge_n = 100000;
    std::string bridge_alpha = "pow:0.6";
    long bridge_samples = 10000;
    std::uint64_t bridge_seed = 0;
    int bridge_grid_points = 101;
    std::string bridge_pairs = "0.25:0.75,0.5:0.5,0.25:0.25,0.75:0.75";
    int bridge_threads = 1;
    std::string bridge_out;
    bridge_cmd->add_option("--n", bridge_n, "permutation length");
    bridge_cmd->add_option("--alpha", bridge_alpha, "cycle cap (integer or pow:beta)");
    bridge_cmd->add_option("--samples", bridge_samples, "batch size");
    bridge_cmd->add_option("--seed", bridge_seed, "rng seed")->required();
    bridge_cmd->add_option("--t-grid", bridge_grid_points, "uniform grid points on [0,1]");
    bridge_cmd->add_option("--pairs", bridge_pairs, "s:t covariance pairs");
    bridge_cmd->add_option("--threads", bridge_threads, "worker threads");
    bridge_cmd->add_option("-o,--output", bridge_out, "CSV path");
    bridge_cmd->set_config("--config");

    auto* longest_cmd = exp_cmd->add_subcommand(
        "longest", "law of the k longest cycles; they concentrate at the cap alpha");
    long longest_n = 10000;
    std::string longest_alpha = "22";
    int longest_k = 3;
    long longest_samples = 1000;
    std::uint64_t longest_seed = 0;
    int longest_threads = 1;
    std::string longest_out;
    longest_cmd->add_option("--n", longest_n, "permutation length");
    longest_cmd->add_option("--alpha", longest_alpha, "cycle cap (integer or pow:beta)");
    longest_cmd->add_option("--k", longest_k, "how many longest cycles to track");
    longest_cmd->add_option("--samples", longest_samples, "batch size");
    longest_cmd->add_option("--seed", longest_seed, "rng seed")->required();
    longest_cmd->add_option("--threads", longest_threads, "worker threads");
    longest_cmd->add_option("-o,--output", longest_out, "CSV path");
    longest_cmd->set_config("--config");

    auto* tilt_cmd = exp_cmd->add_subcommand(
        "tilt-check",
        "exact marginal P[C_m = j] against the tilted-Poisson prediction e^{-mu} mu^j/j!");
    long tiltc_n = 100;
    std::string tiltc_alpha = "10";
    long tiltc_m = 5;
    long tiltc_jmax = -1;
    std::string tiltc_out;
    tilt_cmd->add_option("--n", tiltc_n, "permutation length");
    tilt_cmd->add_option("--alpha", tiltc_alpha, "cycle cap (integer or pow:beta)");
    tilt_cmd->add_option("--m", tiltc_m, "cycle length to inspect");
    tilt_cmd->add_option("--jmax", tiltc_jmax, "largest count (default: adaptive)");
    tilt_cmd->add_option("-o,--output", tiltc_out, "CSV path");
    tilt_cmd->set_config("--config");

    // ---- rerun ------------------------------------------------------------
    auto* rerun_cmd =
        app.add_subcommand("rerun", "replay a run from its manifest; outputs are byte-identical");
    std::string rerun_path;
    rerun_cmd->add_option("manifest", rerun_path, "manifest JSON emitted by a previous run")
        ->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    auto manifest_for = [&](const std::string& command) {
        nlohmann::json m = make_manifest(command);
        m["argv"] = args;
        return m;
    };

    try {
        if (*count_cmd) {
            long alpha = parse_alpha(count_alpha).resolve(std::max<long>(count_n, 1));
            CountMode mode =
                count_mode == "exact"
                    ? CountMode::exact
                    : count_mode == "logspace"
                          ? CountMode::logspace
                          : (count_n <= 2000 ? CountMode::exact : CountMode::logspace);
            if (mode == CountMode::exact)
                std::cout << count_constrained_exact(count_n, alpha).get_str() << "\n";
            else
                std::cout << logreal_sci(count_constrained(count_n, alpha, mode)) << "\n";
        } else if (*saddle_cmd) {
            long alpha = parse_alpha(saddle_alpha).resolve(saddle_n);
            SaddlePoint sp = solve_saddle(saddle_n, alpha);
            std::cout << "x " << format_double(sp.x) << "\n";
            std::cout << "residual " << format_double(sp.residual) << "\n";
            if (saddle_moments) {
                LambdaMoments lm = lambda_moments(sp);
                for (int p = 0; p <= 4; ++p)
                    std::cout << "lambda" << p << " " << format_double(lm[p]) << "\n";
            }
        } else if (*sample_cmd) {
            SamplerConfig cfg;
            cfg.n = sample_n;
            cfg.alpha = parse_alpha(sample_alpha).resolve(sample_n);
            cfg.method =
                sample_method == "recursive" ? SampleMethod::recursive : SampleMethod::rejection;
            cfg.seed = sample_seed;
            cfg.batch = sample_count;
            cfg.threads = sample_threads;
            if (sample_tilt > 0.0) cfg.tilt = sample_tilt;
            std::shared_ptr<const CountTable> table;
            if (cfg.method == SampleMethod::recursive) table = acquire_table(cfg.alpha, cfg.n);
            auto samples = sample_batch(cfg, table);
            std::ostringstream body;
            for (auto& cs : samples) body << cs.to_record() << "\n";
            nlohmann::json m = manifest_for("sample");
            m["config"] = {{"n", cfg.n},
                           {"alpha", cfg.alpha},
                           {"method", sample_method},
                           {"seed", cfg.seed},
                           {"samples", cfg.batch},
                           {"tilt", sample_tilt},
                           {"threads", sample_threads}};
            Output{sample_out}.emit_text(body.str(), m);
        } else if (*verify_cmd) {
            AlphaRule rule = parse_alpha(verify_alpha);
            CsvTable csv;
            csv.header = {"n",
                          "alpha",
                          "log_exact",
                          "log_estimate",
                          "log_quadrature",
                          "rel_err_estimate",
                          "rel_err_quadrature",
                          "claimed_err"};
            nlohmann::json results = nlohmann::json::array();
            for (long n : parse_grid(verify_grid)) {
                long alpha = rule.resolve(n);
                CountTable table(alpha, n, n <= 2000 ? CountMode::exact : CountMode::logspace);
                LogReal exact = table.z(n);
                WeightRow w = WeightRow::unit(alpha);
                CoeffEstimate est = coeff_estimate(FunctionSpec::one(), w, n);
                QuadratureResult quad = coeff_quadrature(FunctionSpec::one(), w, n);
                csv.add_row({std::to_string(n), std::to_string(alpha),
                             format_double(exact.log_magnitude),
                             format_double(est.value.log_magnitude),
                             format_double(quad.value.log_magnitude),
                             format_double(est.value.rel_diff(exact)),
                             format_double(quad.value.rel_diff(exact)),
                             format_double(est.claimed_rel_error)});
                results.push_back({{"n", n},
                                   {"alpha", alpha},
                                   {"rel_err_estimate", est.value.rel_diff(exact)},
                                   {"quadrature_nodes", quad.nodes}});
            }
            nlohmann::json m = manifest_for("verify-asymptotics");
            m["config"] = {{"n_grid", verify_grid}, {"alpha", rule.str()}};
            m["results"] = results;
            Output{verify_out}.emit(csv, m);
        } else if (*tv_cmd) {
            AlphaRule rule = parse_alpha(tv_alpha);
            if (tv_samples > 0 && tv_cmd->count("--seed") == 0)
                throw CLI::ValidationError("--seed is required when sampling");
            CsvTable csv;
            csv.header = {"n", "alpha", "b", "tv_exact", "tv_empirical", "samples"};
            for (long n : parse_grid(tv_grid)) {
                long alpha = rule.resolve(n);
                double tv = tv_exact(n, alpha, tv_b);
                std::string emp = "nan";
                if (tv_samples > 0) {
                    SamplerConfig cfg;
                    cfg.n = n;
                    cfg.alpha = alpha;
                    cfg.seed = tv_seed;
                    cfg.batch = tv_samples;
                    cfg.threads = tv_threads;
                    auto samples = sample_batch(cfg, acquire_table(alpha, n));
                    emp = format_double(tv_empirical(samples, tv_b));
                }
                csv.add_row({std::to_string(n), std::to_string(alpha), std::to_string(tv_b),
                             format_double(tv), emp, std::to_string(tv_samples)});
            }
            nlohmann::json m = manifest_for("experiment poisson-tv");
            m["config"] = {{"n_grid", tv_grid}, {"alpha", rule.str()},
                           {"b", tv_b},         {"samples", tv_samples},
                           {"seed", tv_seed},   {"threads", tv_threads}};
            Output{tv_out}.emit(csv, m);
        } else if (*clt_cmd) {
            long alpha = parse_alpha(clt_alpha).resolve(clt_n);
            SamplerConfig cfg;
            cfg.n = clt_n;
            cfg.alpha = alpha;
            cfg.seed = clt_seed;
            cfg.batch = clt_samples;
            cfg.threads = clt_threads;
            auto samples = sample_batch(cfg, acquire_table(alpha, clt_n));
            CsvTable csv;
            csv.header = {"n",  "alpha",     "m",          "mu",     "mean_std",
                          "var_std", "ks_normal", "low_mean_warning", "samples"};
            std::vector<long> ms = parse_grid(clt_m);
            std::vector<MomentReport> reports;
            for (long m_len : ms) {
                MomentReport rep = clt_statistic(samples, m_len, mu(clt_n, alpha, m_len));
                csv.add_row({std::to_string(clt_n), std::to_string(alpha), std::to_string(m_len),
                             format_double(mu(clt_n, alpha, m_len)), format_double(rep.mean),
                             format_double(rep.variance), format_double(rep.ks_normal),
                             rep.low_mean_warning ? "1" : "0", std::to_string(clt_samples)});
                reports.push_back(std::move(rep));
            }
            CsvTable corr;
            corr.header = {"m1", "m2", "corr_std", "samples"};
            for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
                double c = correlation(reports[i].standardized, reports[i + 1].standardized);
                corr.add_row({std::to_string(ms[i]), std::to_string(ms[i + 1]), format_double(c),
                              std::to_string(clt_samples)});
            }
            nlohmann::json m = manifest_for("experiment clt");
            m["config"] = {{"n", clt_n},           {"alpha", alpha},
                           {"m", clt_m},           {"samples", clt_samples},
                           {"seed", clt_seed},     {"threads", clt_threads}};
            Output{clt_out}.emit(csv, m);
            if (!clt_out.empty()) {
                std::string corr_path = clt_out;
                auto pos = corr_path.rfind(".csv");
                corr_path =
                    (pos != std::string::npos ? corr_path.substr(0, pos) : corr_path) + "_corr.csv";
                write_csv(corr, corr_path);
            } else {
                std::cout << corr.to_string();
            }
        } else if (*shape_cmd) {
            long alpha = parse_alpha(shape_alpha).resolve(shape_n);
            SamplerConfig cfg;
            cfg.n = shape_n;
            cfg.alpha = alpha;
            cfg.seed = shape_seed;
            cfg.batch = shape_samples;
            cfg.threads = shape_threads;
            auto samples = sample_batch(cfg, acquire_table(alpha, shape_n));
            PathBuilder pb(shape_n, alpha, PathBuilder::uniform_grid(shape_grid_points));
            std::vector<double> mean_K(pb.grid().size(), 0.0), mean_S(pb.grid().size(), 0.0);
            long exceed_K = 0, exceed_S = 0;
            double sup_K_acc = 0.0, sup_S_acc = 0.0;
            for (auto& cs : samples) {
                ProcessPath k = pb.shape(cs), s = pb.index_shape(cs);
                double dk = PathBuilder::sup_deviation_from_identity(k);
                double ds = PathBuilder::sup_deviation_from_identity(s);
                sup_K_acc += dk;
                sup_S_acc += ds;
                if (dk > shape_threshold) ++exceed_K;
                if (ds > shape_threshold) ++exceed_S;
                for (std::size_t i = 0; i < k.value.size(); ++i) {
                    mean_K[i] += k.value[i];
                    mean_S[i] += s.value[i];
                }
            }
            const double inv = 1.0 / static_cast<double>(shape_samples);
            CsvTable csv;
            csv.header = {"t", "b_t", "mean_shape", "mean_index_shape"};
            for (std::size_t i = 0; i < pb.grid().size(); ++i)
                csv.add_row({format_double(pb.grid()[i]), std::to_string(pb.cutoffs()[i]),
                             format_double(mean_K[i] * inv), format_double(mean_S[i] * inv)});
            nlohmann::json m = manifest_for("experiment shape");
            m["config"] = {{"n", shape_n},
                           {"alpha", alpha},
                           {"samples", shape_samples},
                           {"seed", shape_seed},
                           {"t_grid", shape_grid_points},
                           {"threshold", shape_threshold},
                           {"threads", shape_threads}};
            m["results"] = {{"p_exceed_shape", exceed_K * inv},
                            {"p_exceed_index_shape", exceed_S * inv},
                            {"mean_sup_dev_shape", sup_K_acc * inv},
                            {"mean_sup_dev_index_shape", sup_S_acc * inv}};
            Output{shape_out}.emit(csv, m);
        } else if (*bridge_cmd) {
            long alpha = parse_alpha(bridge_alpha).resolve(bridge_n);
            SamplerConfig cfg;
            cfg.n = bridge_n;
            cfg.alpha = alpha;
            cfg.seed = bridge_seed;
            cfg.batch = bridge_samples;
            cfg.threads = bridge_threads;
            auto samples = sample_batch(cfg, acquire_table(alpha, bridge_n));
            PathBuilder pb(bridge_n, alpha, PathBuilder::uniform_grid(bridge_grid_points));
            std::vector<ProcessPath> paths;
            paths.reserve(samples.size());
            double max_abs_index_t1 = 0.0;
            for (auto& cs : samples) {
                paths.push_back(pb.fluctuation(cs));
                max_abs_index_t1 =
                    std::max(max_abs_index_t1, std::abs(pb.index_fluctuation(cs).value.back()));
            }
            auto pairs = parse_pairs(bridge_pairs);
            auto est = bridge_covariance(paths, pairs);
            CsvTable csv;
            csv.header = {"s", "t", "cov_est", "cov_pred", "stderr"};
            for (auto& e : est)
                csv.add_row({format_double(e.s), format_double(e.t), format_double(e.estimate),
                             format_double(e.prediction), format_double(e.std_error)});
            nlohmann::json m = manifest_for("experiment bridge");
            m["config"] = {{"n", bridge_n},
                           {"alpha", alpha},
                           {"samples", bridge_samples},
                           {"seed", bridge_seed},
                           {"t_grid", bridge_grid_points},
                           {"pairs", bridge_pairs},
                           {"threads", bridge_threads}};
            m["results"] = {{"max_abs_index_fluctuation_at_1", max_abs_index_t1}};
            Output{bridge_out}.emit(csv, m);
        } else if (*longest_cmd) {
            long alpha = parse_alpha(longest_alpha).resolve(longest_n);
            SamplerConfig cfg;
            cfg.n = longest_n;
            cfg.alpha = alpha;
            cfg.seed = longest_seed;
            cfg.batch = longest_samples;
            cfg.threads = longest_threads;
            auto samples = sample_batch(cfg, acquire_table(alpha, longest_n));
            auto rep = longest_cycle_report(samples, longest_k, alpha);
            CsvTable csv;
            csv.header = {"rank", "prob_at_alpha", "mean_ratio", "defined"};
            for (int i = 0; i < longest_k; ++i)
                csv.add_row({std::to_string(i + 1),
                             format_double(rep.prob_at_alpha[static_cast<std::size_t>(i)]),
                             format_double(rep.mean_ratio[static_cast<std::size_t>(i)]),
                             std::to_string(rep.defined[static_cast<std::size_t>(i)])});
            nlohmann::json m = manifest_for("experiment longest");
            m["config"] = {{"n", longest_n}, {"alpha", alpha},
                           {"k", longest_k}, {"samples", longest_samples},
                           {"seed", longest_seed}, {"threads", longest_threads}};
            m["results"] = {{"prob_top_k_all_alpha", rep.prob_top_k_all_alpha}};
            Output{longest_out}.emit(csv, m);
        } else if (*tilt_cmd) {
            long alpha = parse_alpha(tiltc_alpha).resolve(tiltc_n);
            auto rows = tilted_poisson_check(tiltc_n, alpha, tiltc_m, tiltc_jmax);
            CsvTable csv;
            csv.header = {"j", "p_exact", "p_poisson", "ratio"};
            for (auto& r : rows)
                csv.add_row({std::to_string(r.j), format_double(r.exact),
                             format_double(r.poisson), format_double(r.ratio)});
            nlohmann::json m = manifest_for("experiment tilt-check");
            m["config"] = {{"n", tiltc_n}, {"alpha", alpha}, {"m", tiltc_m}, {"jmax", tiltc_jmax}};
            Output{tiltc_out}.emit(csv, m);
        } else if (*rerun_cmd) {
            if (!allow_rerun) throw std::runtime_error("nested rerun is not allowed");
            return cmd_rerun(rerun_path);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}
