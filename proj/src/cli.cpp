#include "levysim/cli.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <sstream>
#include <thread>

#include "levysim/jumpdiff.hpp"
#include "levysim/oracles.hpp"
#include "levysim/quadrature.hpp"
#include "levysim/samplers.hpp"
#include "levysim/specfun.hpp"

namespace levysim::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kDefaultSeed = 20250809;
const std::vector<std::string> kCommonKeys = {"seed", "out", "workers"};

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output file: " + (dir / name).string());
    return os;
}

CheckResult check(const std::string& name, bool pass, const std::string& detail) {
    return CheckResult{name, pass, detail};
}

// ---------------------------------------------------------------------------
// Generic sampler-convergence runner: n draws into a histogram with
// power-of-two checkpoints; returns the full chain for correlation work.
// ---------------------------------------------------------------------------

struct SamplerRun {
    std::vector<double> chain;
    Histogram histogram;
    std::vector<ConvergenceRecord> records;
    double wall_seconds = 0.0; // sampling only, checkpoint work excluded
};

SamplerRun run_sampler_convergence(VariateSource& source, std::int64_t n, RandomStream& rng,
                                   double lo, double hi, int bins,
                                   const std::vector<double>& exact_bin_avg) {
    SamplerRun run{{}, Histogram(lo, hi, bins), {}, 0.0};
    run.chain.resize(static_cast<std::size_t>(n));
    burn_in(source, 10000, rng);

    const auto t0 = Clock::now();
    double excluded = 0.0;
    std::int64_t next_checkpoint = 1;
    auto seconds = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = source.next(rng);
        run.chain[static_cast<std::size_t>(i)] = x;
        run.histogram.add(x);
        if (i + 1 == next_checkpoint || i + 1 == n) {
            while (next_checkpoint <= i + 1) next_checkpoint *= 2;
            const double wall = seconds() - excluded;
            const double mark = seconds();
            run.records.push_back({wall, i + 1, linf_error(run.histogram, exact_bin_avg)});
            excluded += seconds() - mark;
        }
    }
    run.wall_seconds = seconds() - excluded;
    return run;
}

// Strong-mode switch count for two-mode chains: transitions of the last
// visited strong mode between [0, 0.25) and [0.5, 0.75).
std::int64_t strong_mode_switches(std::span<const double> chain) {
    int last = 0;
    std::int64_t switches = 0;
    for (const double x : chain) {
        const int mode = (x >= 0.0 && x < 0.25) ? 1 : (x >= 0.5 && x < 0.75) ? 2 : 0;
        if (mode != 0) {
            if (last != 0 && mode != last) ++switches;
            last = mode;
        }
    }
    return switches;
}

double high_mode_occupancy(std::span<const double> chain) {
    std::int64_t hits = 0;
    for (const double x : chain)
        if ((x >= 0.0 && x < 0.25) || (x >= 0.5 && x < 0.75)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(chain.size());
}

void write_trace_csv(std::ostream& os, std::span<const double> chain) {
    os << "step,value\n";
    char buf[48];
    for (std::size_t i = 0; i < chain.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, chain[i]);
        os << buf;
    }
}

void dump_subdivision(const fs::path& dir, const std::string& name,
                      const VariateSource& source) {
    if (const Subdivision* sub = source.subdivision()) {
        auto os = open_csv(dir, name);
        sub->dump_csv(os);
    }
}

// ---------------------------------------------------------------------------
// Jump-diffusion batches with optional path sharding across workers.
// ---------------------------------------------------------------------------

BatchResult run_batch(const JumpDiffusionConfig& config, const BatchOptions& options,
                      std::uint64_t seed, int workers) {
    if (workers <= 1) return simulate_terminal_batch(config, options, seed);

    std::vector<BatchResult> parts(static_cast<std::size_t>(workers),
                                   BatchResult{Histogram(options.hist_lo, options.hist_hi,
                                                         options.bins),
                                               {},
                                               0.0,
                                               0.0});
    std::vector<std::thread> threads;
    const std::int64_t per = options.n_paths / workers;
    const auto t0 = Clock::now();
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            BatchOptions shard = options;
            shard.n_paths = per + (w == 0 ? options.n_paths - per * workers : 0);
            shard.exact_bin_avg.clear(); // records only for the merged state
            parts[static_cast<std::size_t>(w)] = simulate_terminal_batch(
                config, shard, seed, "#w" + std::to_string(w));
        });
    }
    for (auto& t : threads) t.join();

    BatchResult merged{Histogram(options.hist_lo, options.hist_hi, options.bins), {}, 0.0, 0.0};
    for (const BatchResult& part : parts) merged.histogram.merge(part.histogram);
    merged.final_lambda = parts.back().final_lambda;
    merged.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!options.exact_bin_avg.empty())
        merged.records.push_back({merged.wall_seconds, options.n_paths,
                                  linf_error(merged.histogram, options.exact_bin_avg)});
    return merged;
}

void write_batch_outputs(const fs::path& dir, const std::string& stem, const BatchResult& run,
                         const std::vector<double>& exact_bin_avg) {
    auto hist = open_csv(dir, stem + "_hist.csv");
    write_histogram_csv(hist, run.histogram, exact_bin_avg);
    auto conv = open_csv(dir, stem + "_convergence.csv");
    write_convergence_csv(conv, run.records);
}

double final_error(const BatchResult& run) { return run.records.back().linf_error; }

// Binomial 3-sigma band for a tail-mass comparison.
double tail_3sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

} // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

Config Config::from_file(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config file not readable: " + path.string());
    Config config;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
        line.erase(line.begin(), std::find_if_not(line.begin(), line.end(), is_space));
        line.erase(std::find_if_not(line.rbegin(), line.rend(), is_space).base(), line.end());
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(std::find_if_not(key.rbegin(), key.rend(), is_space).base(), key.end());
        value.erase(value.begin(), std::find_if_not(value.begin(), value.end(), is_space));
        if (key.empty()) throw ConfigError(path.string() + ": empty key");
        config.values_[key] = value;
    }
    return config;
}

double Config::get_double(const std::string& key, double def, double lo, double hi) const {
    const auto it = values_.find(key);
    double v = def;
    if (it != values_.end()) {
        try {
            std::size_t pos = 0;
            v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ConfigError(key + ": not a number: '" + it->second + "'");
        }
    }
    if (!(v >= lo && v <= hi))
        throw ConfigError(key + ": value " + format_g(v) + " outside [" + format_g(lo) + ", " +
                          format_g(hi) + "]");
    return v;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t def, std::int64_t lo,
                             std::int64_t hi) const {
    const auto it = values_.find(key);
    std::int64_t v = def;
    if (it != values_.end()) {
        const std::string& s = it->second;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError(key + ": not an integer: '" + s + "'");
    }
    if (v < lo || v > hi)
        throw ConfigError(key + ": value " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

bool Config::get_bool(const std::string& key, bool def) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + it->second + "'");
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
    const auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& def) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(key + ": bad list element '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

void Config::require_known(const std::vector<std::string>& known) const {
    for (const auto& [key, value] : values_) {
        if (std::find(known.begin(), known.end(), key) != known.end()) continue;
        if (std::find(kCommonKeys.begin(), kCommonKeys.end(), key) != kCommonKeys.end())
            continue;
        throw ConfigError("unknown configuration key: '" + key + "'");
    }
}

std::uint64_t Config::seed() const {
    return static_cast<std::uint64_t>(
        get_int("seed", static_cast<std::int64_t>(kDefaultSeed), 0,
                std::numeric_limits<std::int64_t>::max()));
}

fs::path Config::out_dir() const { return get_string("out", "out"); }

int Config::workers() const { return static_cast<int>(get_int("workers", 1, 1, 256)); }

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
    for (const CheckResult& c : checks)
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
}

bool all_pass(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

// ---------------------------------------------------------------------------
// sweep-width
// ---------------------------------------------------------------------------

int cmd_sweep_width(const Config& config, std::ostream& log) {
    config.require_known({"n_samples", "widths", "omega"});
    const std::int64_t n = config.get_int("n_samples", 1000000, 100000, 1000000000);
    const double omega = config.get_double("omega", 5.0, 0.1, 1e6);
    const std::vector<double> widths = config.get_double_list(
        "widths", {0.5, 1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 16, 20});
    for (const double w : widths)
        if (!(w > 0.0)) throw ConfigError("widths: entries must be positive");

    RandomStream rng(config.seed(), "sweep");
    const DensitySpec density = unit_normal_density(omega);
    const auto sweep = mh_width_sweep(density, widths, n, rng);

    auto os = open_csv(config.out_dir(), "width_correlation.csv");
    os << "width,correlation\n";
    char buf[64];
    for (const auto& [w, c] : sweep) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", w, c);
        os << buf;
    }

    std::size_t arg_min = 0;
    for (std::size_t i = 0; i < sweep.size(); ++i)
        if (sweep[i].correlation < sweep[arg_min].correlation) arg_min = i;
    const double c_min = sweep[arg_min].correlation;
    const bool interior = sweep.size() < 2 || (arg_min > 0 && arg_min + 1 < sweep.size());

    std::vector<CheckResult> checks;
    if (sweep.size() >= 2) {
        checks.push_back(check("width-sweep interior minimum", interior,
                               "argmin width=" + format_g(sweep[arg_min].width)));
        checks.push_back(check("width-sweep c_min in [0.50, 0.60]",
                               c_min >= 0.50 && c_min <= 0.60,
                               "measured=" + format_g(c_min) + " bound=[0.50, 0.60]"));
    }
    print_checks(log, checks);
    log << "wrote width_correlation.csv (" << sweep.size() << " widths, n=" << n << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// two-mode
// ---------------------------------------------------------------------------

int cmd_two_mode(const Config& config, std::ostream& log) {
    config.require_known({"n_samples", "width", "grid_dt"});
    const std::int64_t n = config.get_int("n_samples", 100000, 1000, 1000000000);
    const double width = config.get_double("width", 0.5, 1e-6, 1.0);
    const double grid_dt = config.get_double("grid_dt", 0.0, 0.0, 1e6);

    const DensitySpec density = two_mode_density();
    const std::uint64_t seed = config.seed();

    RandomStream mh_rng(seed, "two-mode-mh");
    LocalMHSampler mh(density, width);
    burn_in(mh, 10000, mh_rng);
    const std::int64_t accepts_before = mh.accept_count();
    const std::int64_t proposals_before = mh.proposal_count();
    std::vector<double> mh_chain(static_cast<std::size_t>(n));
    for (auto& x : mh_chain) x = mh.next(mh_rng);

    RandomStream sf_rng(seed, "two-mode-sf");
    LocalSFSampler sf(density, grid_dt); // auto grid: slightly above sup nu
    std::vector<double> sf_chain(static_cast<std::size_t>(n));
    for (auto& x : sf_chain) x = sf.next(sf_rng);

    const fs::path dir = config.out_dir();
    {
        auto os = open_csv(dir, "two_mode_mh_trace.csv");
        write_trace_csv(os, mh_chain);
    }
    {
        auto os = open_csv(dir, "two_mode_sf_trace.csv");
        write_trace_csv(os, sf_chain);
    }

    const double acceptance = static_cast<double>(mh.accept_count() - accepts_before) /
                              static_cast<double>(mh.proposal_count() - proposals_before);
    const double occ_mh = high_mode_occupancy(mh_chain);
    const double occ_sf = high_mode_occupancy(sf_chain);
    const std::int64_t switches_mh = strong_mode_switches(mh_chain);
    const std::int64_t switches_sf = strong_mode_switches(sf_chain);
    const double ratio = static_cast<double>(switches_sf) /
                         static_cast<double>(std::max<std::int64_t>(switches_mh, 1));

    {
        auto os = open_csv(dir, "two_mode_summary.csv");
        os << "sampler,acceptance,high_mode_occupancy,mode_switches\n";
        char buf[128];
        std::snprintf(buf, sizeof buf, "local_mh,%.17g,%.17g,%lld\n", acceptance, occ_mh,
                      static_cast<long long>(switches_mh));
        os << buf;
        std::snprintf(buf, sizeof buf, "local_sf,,%.17g,%lld\n", occ_sf,
                      static_cast<long long>(switches_sf));
        os << buf;
    }

    std::vector<CheckResult> checks;
    checks.push_back(check("two-mode MH acceptance 0.55 +/- 0.03",
                           std::abs(acceptance - 0.55) <= 0.03,
                           "measured=" + format_g(acceptance) + " bound=[0.52, 0.58]"));
    checks.push_back(check("two-mode MH high-mode occupancy 0.990 +/- 0.005",
                           std::abs(occ_mh - 0.990) <= 0.005,
                           "measured=" + format_g(occ_mh)));
    checks.push_back(check("two-mode SF high-mode occupancy 0.990 +/- 0.005",
                           std::abs(occ_sf - 0.990) <= 0.005,
                           "measured=" + format_g(occ_sf)));
    checks.push_back(check("two-mode SF/MH mode-switch ratio >= 10", ratio >= 10.0,
                           "measured=" + format_g(ratio) + " (sf=" +
                               std::to_string(switches_sf) + ", mh=" +
                               std::to_string(switches_mh) + ")"));
    print_checks(log, checks);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gauss-convergence
// ---------------------------------------------------------------------------

int cmd_gauss_convergence(const Config& config, std::ostream& log) {
    config.require_known(
        {"n_samples", "width", "n_cells", "rebuild_period", "omega", "bins", "range"});
    const std::int64_t n = config.get_int("n_samples", 1000000, 1000, 1000000000);
    const double width = config.get_double("width", 7.0, 1e-6, 1e3);
    const int n_cells = static_cast<int>(config.get_int("n_cells", 256, 1, 1 << 20));
    const auto rebuild = config.get_int("rebuild_period", Subdivision::kDefaultRebuildPeriod,
                                        1, 1 << 30);
    const double omega = config.get_double("omega", 5.0, 0.1, 1e6);
    const int bins = static_cast<int>(config.get_int("bins", 100, 1, 100000));
    const double range = config.get_double("range", 5.0, 0.1, 1e6);

    const DensitySpec density = unit_normal_density(omega);
    const auto exact = bin_averaged_density(-range, range, bins, [](double x) {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
    });
    const std::uint64_t seed = config.seed();
    const fs::path dir = config.out_dir();

    struct Entry {
        std::string name;
        std::unique_ptr<VariateSource> source;
    };
    std::vector<Entry> entries;
    entries.push_back({"localmh", std::make_unique<LocalMHSampler>(density, width)});
    entries.push_back({"aimh", std::make_unique<AIMHSampler>(density, n_cells, rebuild)});
    entries.push_back({"localsf", std::make_unique<LocalSFSampler>(density)});
    entries.push_back({"aisf", std::make_unique<AISFSampler>(density, n_cells, rebuild)});

    std::map<std::string, SamplerRun> runs;
    std::map<std::string, double> correlations;
    for (Entry& e : entries) {
        RandomStream rng(seed, "gauss-" + e.name);
        SamplerRun run =
            run_sampler_convergence(*e.source, n, rng, -range, range, bins, exact);
        correlations[e.name] = correlation(run.chain);
        auto os = open_csv(dir, "gauss_" + e.name + "_convergence.csv");
        write_convergence_csv(os, run.records);
        dump_subdivision(dir, "gauss_" + e.name + "_subdivision.csv", *e.source);
        runs.emplace(e.name, std::move(run));
        log << "gauss " << e.name << ": correlation=" << format_g(correlations[e.name])
            << " rate=" << format_g(static_cast<double>(n) / runs.at(e.name).wall_seconds)
            << "/s final_linf=" << format_g(runs.at(e.name).records.back().linf_error)
            << "\n";
    }

    const double rate_ratio =
        runs.at("aisf").wall_seconds > 0.0
            ? runs.at("localsf").wall_seconds / runs.at("aisf").wall_seconds
            : 0.0;
    const double t_equal = std::min(runs.at("aisf").records.back().wall_seconds,
                                    runs.at("localmh").records.back().wall_seconds);
    const double aisf_err = error_at_wall_time(runs.at("aisf").records, t_equal);
    const double mh_err = error_at_wall_time(runs.at("localmh").records, t_equal);
    const double three_sigma = 3.0 / std::sqrt(static_cast<double>(n));

    std::vector<CheckResult> checks;
    checks.push_back(check("gauss AIMH lag-1 correlation <= 0.05",
                           correlations.at("aimh") <= 0.05,
                           "measured=" + format_g(correlations.at("aimh"))));
    checks.push_back(check("gauss AISF |correlation| <= 3/sqrt(N)",
                           std::abs(correlations.at("aisf")) <= three_sigma,
                           "measured=" + format_g(correlations.at("aisf")) +
                               " bound=" + format_g(three_sigma)));
    checks.push_back(check("gauss AISF/LocalSF variate-rate ratio >= 1.5", rate_ratio >= 1.5,
                           "measured=" + format_g(rate_ratio)));
    checks.push_back(check("gauss AISF error < LocalMH error at equal wall time",
                           aisf_err < mh_err,
                           "aisf=" + format_g(aisf_err) + " localmh=" + format_g(mh_err)));
    print_checks(log, checks);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// merton
// ---------------------------------------------------------------------------

int cmd_merton(const Config& config, std::ostream& log) {
    config.require_known({"n_paths", "bins", "range", "omega", "width", "n_cells",
                          "rebuild_period", "lambda", "sigma_b", "jump_mean", "jump_stddev"});
    const std::int64_t n_paths = config.get_int("n_paths", 100000, 100, 1000000000);
    const int bins = static_cast<int>(config.get_int("bins", 100, 1, 100000));
    const double range = config.get_double("range", 10.0, 0.1, 1e6);
    const double omega = config.get_double("omega", 8.0, 0.1, 1e6);
    const double width = config.get_double("width", 4.0, 1e-6, 1e3);
    const int n_cells = static_cast<int>(config.get_int("n_cells", 256, 1, 1 << 20));
    const auto rebuild = config.get_int("rebuild_period", Subdivision::kDefaultRebuildPeriod,
                                        1, 1 << 30);
    const double lambda = config.get_double("lambda", 10.0, 1e-9, 1e6);
    const double sigma_b = config.get_double("sigma_b", 1.0, 0.0, 1e6);
    const double jump_mean = config.get_double("jump_mean", 0.0, -1e6, 1e6);
    const double jump_stddev = config.get_double("jump_stddev", 1.0, 1e-9, 1e6);
    if (jump_mean != 0.0 || jump_stddev != 1.0 || sigma_b != 1.0)
        log << "note: exact-density comparison assumes sigma_b=1, jump N(0,1)\n";

    const DensitySpec density =
        gaussian_jump_density(GaussianJumpSpec{jump_mean, jump_stddev}, lambda, omega);
    const auto exact = bin_averaged_density(
        -range, range, bins, [&](double x) { return merton_pdf(x, 1.0, lambda); });
    // Oracle tail mass beyond |x| = 8 for the heavy-tail comparison.
    const double oracle_tail =
        1.0 - integrate([&](double x) { return merton_pdf(x, 1.0, lambda); }, -8.0, 8.0, 1e-10);

    JumpDiffusionConfig jd;
    jd.brownian_vol = sigma_b;
    jd.intensity = lambda;
    jd.jump_density = density;
    jd.lambda_mode = LambdaMode::kFixed;

    BatchOptions options;
    options.n_paths = n_paths;
    options.bins = bins;
    options.hist_lo = -range;
    options.hist_hi = range;
    options.exact_bin_avg = exact;

    const std::uint64_t seed = config.seed();
    const int workers = config.workers();
    const fs::path dir = config.out_dir();

    struct Variant {
        std::string name;
        SamplerKind kind;
    };
    const std::vector<Variant> variants = {
        {"localmh", LocalMHKind{width}},
        {"aimh", AIMHKind{n_cells, rebuild}},
        {"aisf", AISFKind{n_cells, rebuild}},
    };

    std::map<std::string, BatchResult> results;
    for (const Variant& v : variants) {
        JumpDiffusionConfig run_config = jd;
        run_config.sampler = v.kind;
        results.emplace(v.name, run_batch(run_config, options, seed, workers));
        write_batch_outputs(dir, "merton_" + v.name, results.at(v.name), exact);
        log << "merton " << v.name
            << ": final_linf=" << format_g(final_error(results.at(v.name)))
            << " tail(|x|>8)=" << format_g(tail_mass(results.at(v.name).histogram, 8.0))
            << "\n";
    }

    // I.i.d.-oracle run: known-good normal draws in place of the chain.
    BatchResult oracle_run{Histogram(-range, range, bins), {}, lambda, 0.0};
    {
        PathStreams streams(seed, "#oracle");
        IidNormalSource source(jump_mean, jump_stddev);
        const auto t0 = Clock::now();
        std::int64_t next_checkpoint = 1;
        double excluded = 0.0;
        auto seconds = [&] {
            return std::chrono::duration<double>(Clock::now() - t0).count();
        };
        for (std::int64_t p = 1; p <= n_paths; ++p) {
            double jump_part = 0.0;
            const std::int64_t jumps = streams.jumps.poisson(lambda);
            for (std::int64_t j = 0; j < jumps; ++j) jump_part += source.next(streams.sampler);
            oracle_run.histogram.add(jump_part + sigma_b * streams.brownian.normal());
            if (p == next_checkpoint || p == n_paths) {
                while (next_checkpoint <= p) next_checkpoint *= 2;
                const double wall = seconds() - excluded;
                const double mark = seconds();
                oracle_run.records.push_back({wall, p, linf_error(oracle_run.histogram, exact)});
                excluded += seconds() - mark;
            }
        }
        oracle_run.wall_seconds = seconds() - excluded;
    }
    write_batch_outputs(dir, "merton_oracle", oracle_run, exact);
    log << "merton oracle(iid): final_linf=" << format_g(final_error(oracle_run))
        << " tail(|x|>8)=" << format_g(tail_mass(oracle_run.histogram, 8.0)) << "\n";

    const double aisf_err = final_error(results.at("aisf"));
    const double t_equal = std::min(results.at("aisf").records.back().wall_seconds,
                                    results.at("aimh").records.back().wall_seconds);
    const double aimh_at = error_at_wall_time(results.at("aimh").records, t_equal);
    const double aisf_at = error_at_wall_time(results.at("aisf").records, t_equal);
    const double mh_tail = tail_mass(results.at("localmh").histogram, 8.0);

    std::vector<CheckResult> checks;
    checks.push_back(check("merton local MH tail mass |x|>8 >= 2x oracle",
                           mh_tail >= 2.0 * oracle_tail,
                           "measured=" + format_g(mh_tail) +
                               " oracle=" + format_g(oracle_tail)));
    checks.push_back(check("merton AISF final L-inf <= 0.004", aisf_err <= 0.004,
                           "measured=" + format_g(aisf_err) + " bound=0.004"));
    checks.push_back(check("merton AIMH error > AISF error at equal wall time",
                           aimh_at > aisf_at,
                           "aimh=" + format_g(aimh_at) + " aisf=" + format_g(aisf_at)));
    checks.push_back(check(
        "merton AISF matches iid-oracle within combined statistical error",
        std::abs(aisf_err - final_error(oracle_run)) <= 0.003,
        "aisf=" + format_g(aisf_err) + " iid=" + format_g(final_error(oracle_run)) +
            " bound=0.003"));
    print_checks(log, checks);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// nig / cgmy
// ---------------------------------------------------------------------------

int cmd_nig(const Config& config, std::ostream& log) {
    config.require_known({"n_paths", "n_direct", "eps", "bins", "range", "omega", "n_cells",
                          "rebuild_period", "ct_sigma", "ct_theta", "ct_kappa",
                          "fixed_lambda"});
    const std::int64_t n_paths = config.get_int("n_paths", 100000, 100, 1000000000);
    const std::int64_t n_direct = config.get_int("n_direct", 1000000, 100, 1000000000);
    const double eps = config.get_double("eps", 0.005, 1e-9, 1.0);
    const int bins = static_cast<int>(config.get_int("bins", 100, 1, 100000));
    const double range = config.get_double("range", 8.0, 0.1, 1e6);
    const double omega = config.get_double("omega", 25.0, 1.0, 1e6);
    const int n_cells = static_cast<int>(config.get_int("n_cells", 256, 1, 1 << 20));
    const auto rebuild = config.get_int("rebuild_period", Subdivision::kDefaultRebuildPeriod,
                                        1, 1 << 30);
    const double ct_sigma = config.get_double("ct_sigma", 1.0, 1e-9, 1e6);
    const double ct_theta = config.get_double("ct_theta", 0.0, -1e6, 1e6);
    const double ct_kappa = config.get_double("ct_kappa", 0.5, 1e-9, 1e6);
    const bool fixed_lambda = config.get_bool("fixed_lambda", false);

    const NIGSpec spec = nig_params_from_ct(ct_sigma, ct_theta, ct_kappa);
    const double sigma_eps = small_jump_sigma_nig(eps, spec);
    const DensitySpec density = nig_levy_density(spec, eps, omega);
    const JumpDiffusionConfig jd = approximate_infinite_activity(
        density, eps, sigma_eps, fixed_lambda ? LambdaMode::kFixed : LambdaMode::kAdaptive);
    log << "nig: alpha=" << format_g(spec.alpha) << " beta=" << format_g(spec.beta)
        << " delta=" << format_g(spec.delta) << " brownian_vol=" << format_g(sigma_eps)
        << " initial_lambda=" << format_g(jd.intensity) << "\n";

    const auto exact = bin_averaged_density(
        -range, range, bins, [&](double x) { return nig_pdf(x, 1.0, spec); });
    const double oracle_tail =
        1.0 - integrate([&](double x) { return nig_pdf(x, 1.0, spec); }, -5.0, 5.0, 1e-10);

    BatchOptions options;
    options.n_paths = n_paths;
    options.bins = bins;
    options.hist_lo = -range;
    options.hist_hi = range;
    options.exact_bin_avg = exact;

    const std::uint64_t seed = config.seed();
    const int workers = config.workers();
    const fs::path dir = config.out_dir();

    std::map<std::string, BatchResult> results;
    for (const auto& [name, kind] :
         std::vector<std::pair<std::string, SamplerKind>>{
             {"aimh", AIMHKind{n_cells, rebuild}}, {"aisf", AISFKind{n_cells, rebuild}}}) {
        JumpDiffusionConfig run_config = jd;
        run_config.sampler = kind;
        results.emplace(name, run_batch(run_config, options, seed, workers));
        write_batch_outputs(dir, "nig_" + name, results.at(name), exact);
        log << "nig " << name << ": final_linf=" << format_g(final_error(results.at(name)))
            << " tail(|x|>5)=" << format_g(tail_mass(results.at(name).histogram, 5.0))
            << " lambda=" << format_g(results.at(name).final_lambda) << "\n";
    }

    // Direct sampler (inverse Gaussian subordination), the exact reference.
    Histogram direct_hist(-range, range, bins);
    {
        RandomStream rng(seed, "nig-direct");
        for (std::int64_t i = 0; i < n_direct; ++i)
            direct_hist.add(nig_direct_sample(spec, 1.0, rng));
        auto os = open_csv(dir, "nig_direct_hist.csv");
        write_histogram_csv(os, direct_hist, exact);
    }
    const double direct_err = linf_error(direct_hist, exact);
    log << "nig direct: linf=" << format_g(direct_err) << " (n=" << n_direct << ")\n";

    {
        std::vector<double> centers, values;
        for (int b = 0; b < bins; ++b) {
            centers.push_back(-range + (b + 0.5) * (2.0 * range / bins));
            values.push_back(nig_pdf(centers.back(), 1.0, spec));
        }
        auto os = open_csv(dir, "nig_pdf.csv");
        write_curve_csv(os, centers, values);
    }

    const double aimh_tail = tail_mass(results.at("aimh").histogram, 5.0);
    const double aisf_tail = tail_mass(results.at("aisf").histogram, 5.0);
    const double band = tail_3sigma(oracle_tail, static_cast<double>(n_paths));

    std::vector<CheckResult> checks;
    checks.push_back(check("nig brownian_vol = 0.067 +/- 0.0005",
                           std::abs(sigma_eps - 0.067) <= 0.0005,
                           "measured=" + format_g(sigma_eps)));
    checks.push_back(check("nig AISF L-inf < AIMH L-inf",
                           final_error(results.at("aisf")) < final_error(results.at("aimh")),
                           "aisf=" + format_g(final_error(results.at("aisf"))) +
                               " aimh=" + format_g(final_error(results.at("aimh")))));
    checks.push_back(check("nig AIMH tail mass exceeds oracle", aimh_tail > oracle_tail,
                           "measured=" + format_g(aimh_tail) +
                               " oracle=" + format_g(oracle_tail)));
    checks.push_back(check("nig AISF tail mass within 3 sigma of oracle",
                           std::abs(aisf_tail - oracle_tail) <= band,
                           "measured=" + format_g(aisf_tail) + " oracle=" +
                               format_g(oracle_tail) + " band=" + format_g(band)));
    checks.push_back(check("nig direct-sampler L-inf <= 0.004", direct_err <= 0.004,
                           "measured=" + format_g(direct_err)));
    print_checks(log, checks);
    return kExitOk;
}

int cmd_cgmy(const Config& config, std::ostream& log) {
    config.require_known({"n_paths", "eps", "bins", "range", "omega", "n_cells",
                          "rebuild_period", "c", "g", "m", "y", "fixed_lambda"});
    const std::int64_t n_paths = config.get_int("n_paths", 100000, 100, 1000000000);
    const double eps = config.get_double("eps", 0.005, 1e-9, 1.0);
    const int bins = static_cast<int>(config.get_int("bins", 100, 1, 100000));
    const double range = config.get_double("range", 6.0, 0.1, 1e6);
    const double omega = config.get_double("omega", 25.0, 1.0, 1e6);
    const int n_cells = static_cast<int>(config.get_int("n_cells", 256, 1, 1 << 20));
    const auto rebuild = config.get_int("rebuild_period", Subdivision::kDefaultRebuildPeriod,
                                        1, 1 << 30);
    const CGMYSpec spec{config.get_double("c", 1.0, 1e-9, 1e6),
                        config.get_double("g", 1.0, 1e-9, 1e6),
                        config.get_double("m", 1.0, 1e-9, 1e6),
                        config.get_double("y", 0.5, -1e6, 1.999999)};
    const bool fixed_lambda = config.get_bool("fixed_lambda", false);
    if (!asmussen_rosinski_ok(spec))
        throw ConfigError("y: jump-diffusion approximation requires 0 < y <= 1, got " +
                          format_g(spec.y));

    const double sigma_eps = small_jump_sigma_cgmy(eps, spec);
    const DensitySpec density = cgmy_levy_density(spec, eps, omega);
    const JumpDiffusionConfig jd = approximate_infinite_activity(
        density, eps, sigma_eps, fixed_lambda ? LambdaMode::kFixed : LambdaMode::kAdaptive);
    log << "cgmy: brownian_vol=" << format_g(sigma_eps)
        << " initial_lambda=" << format_g(jd.intensity) << "\n";

    const auto cf = [&](double u) { return cgmy_cf(u, 1.0, spec); };
    const auto exact = cf_inverted_bin_averages(cf, -range, range, bins);

    // Oracle tail mass beyond |x| = 4 and the normalization diagnostic, both
    // from the inverted density on a wide grid.
    double oracle_tail = 0.0;
    double normalization = 0.0;
    {
        const double wide = 30.0;
        const int n_grid = 6001;
        CfInversionSpec inv;
        inv.x_grid.resize(n_grid);
        for (int i = 0; i < n_grid; ++i)
            inv.x_grid[static_cast<std::size_t>(i)] = -wide + 2.0 * wide * i / (n_grid - 1);
        const auto curve = cf_invert_pdf(cf, inv);
        const double dx = 2.0 * wide / (n_grid - 1);
        // Composite Simpson over the uniform grid.
        for (int i = 0; i < n_grid; ++i) {
            const double w = (i == 0 || i == n_grid - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            normalization += w * curve[static_cast<std::size_t>(i)].second;
            if (std::abs(curve[static_cast<std::size_t>(i)].first) > 4.0)
                oracle_tail += w * curve[static_cast<std::size_t>(i)].second;
        }
        normalization *= dx / 3.0;
        oracle_tail *= dx / 3.0;
    }

    BatchOptions options;
    options.n_paths = n_paths;
    options.bins = bins;
    options.hist_lo = -range;
    options.hist_hi = range;
    options.exact_bin_avg = exact;

    const std::uint64_t seed = config.seed();
    const int workers = config.workers();
    const fs::path dir = config.out_dir();

    std::map<std::string, BatchResult> results;
    for (const auto& [name, kind] :
         std::vector<std::pair<std::string, SamplerKind>>{
             {"aimh", AIMHKind{n_cells, rebuild}}, {"aisf", AISFKind{n_cells, rebuild}}}) {
        JumpDiffusionConfig run_config = jd;
        run_config.sampler = kind;
        results.emplace(name, run_batch(run_config, options, seed, workers));
        write_batch_outputs(dir, "cgmy_" + name, results.at(name), exact);
        log << "cgmy " << name << ": final_linf=" << format_g(final_error(results.at(name)))
            << " tail(|x|>4)=" << format_g(tail_mass(results.at(name).histogram, 4.0))
            << " lambda=" << format_g(results.at(name).final_lambda) << "\n";
    }

    {
        std::vector<double> centers;
        for (int b = 0; b < bins; ++b)
            centers.push_back(-range + (b + 0.5) * (2.0 * range / bins));
        CfInversionSpec inv;
        inv.x_grid = centers;
        const auto curve = cf_invert_pdf(cf, inv);
        std::vector<double> values;
        for (const auto& [x, p] : curve) values.push_back(p);
        auto os = open_csv(dir, "cgmy_pdf.csv");
        write_curve_csv(os, centers, values);
    }

    const double aimh_tail = tail_mass(results.at("aimh").histogram, 4.0);
    const double aisf_tail = tail_mass(results.at("aisf").histogram, 4.0);
    const double band = tail_3sigma(oracle_tail, static_cast<double>(n_paths));

    std::vector<CheckResult> checks;
    checks.push_back(check("cgmy brownian_vol = 0.022 +/- 0.0005",
                           std::abs(sigma_eps - 0.022) <= 0.0005,
                           "measured=" + format_g(sigma_eps)));
    checks.push_back(check("cgmy cf-inverted density integrates to 1 +/- 1e-6",
                           std::abs(normalization - 1.0) <= 1e-6,
                           "measured=" + format_g(normalization)));
    checks.push_back(check("cgmy AISF L-inf < AIMH L-inf",
                           final_error(results.at("aisf")) < final_error(results.at("aimh")),
                           "aisf=" + format_g(final_error(results.at("aisf"))) +
                               " aimh=" + format_g(final_error(results.at("aimh")))));
    checks.push_back(check("cgmy AIMH tail mass exceeds oracle", aimh_tail > oracle_tail,
                           "measured=" + format_g(aimh_tail) +
                               " oracle=" + format_g(oracle_tail)));
    checks.push_back(check("cgmy AISF tail mass within 3 sigma of oracle",
                           std::abs(aisf_tail - oracle_tail) <= band,
                           "measured=" + format_g(aisf_tail) + " oracle=" +
                               format_g(oracle_tail) + " band=" + format_g(band)));
    print_checks(log, checks);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
    std::vector<CheckResult> checks;

    // Alias-table chi-square at the 99.9% level (df = 3) plus a two-weight
    // frequency check.
    {
        RandomStream rng(seed, "alias-chi2");
        const std::vector<double> weights = {1.0, 1.0, 1.0, 1.0};
        const AliasTable table = AliasTable::build(weights);
        std::array<std::int64_t, 4> counts{};
        const std::int64_t n = 1000000;
        for (std::int64_t i = 0; i < n; ++i) ++counts[table.draw(rng)];
        double chi2 = 0.0;
        for (const auto c : counts) {
            const double expect = static_cast<double>(n) / 4.0;
            chi2 += (c - expect) * (c - expect) / expect;
        }
        checks.push_back(check("alias uniform chi-square below 99.9% quantile",
                               chi2 < 16.266236196238130,
                               "chi2=" + format_g(chi2) + " bound=16.27"));

        const AliasTable skew = AliasTable::build(std::vector<double>{1.0, 3.0});
        std::int64_t ones = 0;
        for (std::int64_t i = 0; i < n; ++i) ones += skew.draw(rng) == 1 ? 1 : 0;
        const double freq = static_cast<double>(ones) / static_cast<double>(n);
        checks.push_back(check("alias (1,3) frequency 0.75 +/- 0.003",
                               std::abs(freq - 0.75) <= 0.003, "measured=" + format_g(freq)));
    }

    // SF no-repeat invariant at grid_dt = exact sup.
    {
        RandomStream rng(seed, "sf-no-repeat");
        const DensitySpec density = unit_normal_density(5.0);
        LocalSFSampler sf(density, *density.sup_hint);
        double prev = sf.next(rng);
        bool repeat = false;
        for (int i = 1; i < 1000000; ++i) {
            const double x = sf.next(rng);
            if (x == prev) {
                repeat = true;
                break;
            }
            prev = x;
        }
        checks.push_back(check("SF no consecutive repeats at grid_dt = sup nu", !repeat,
                               repeat ? "repeat found" : "no repeats in 1e6"));
    }

    // Discrete detailed balance: local MH on a 5-step piecewise-constant
    // density, outputs lumped to the steps; stationarity makes the lumped
    // flow counts balance within counting error.
    {
        RandomStream rng(seed, "detailed-balance");
        const double pi_values[5] = {1.0, 2.0, 3.0, 2.0, 1.0};
        DensitySpec density;
        density.lo = 0.0;
        density.hi = 5.0;
        density.evaluate = [&pi_values](double x) {
            int b = static_cast<int>(x);
            if (b > 4) b = 4;
            return pi_values[b];
        };
        density.sup_hint = 3.0;
        LocalMHSampler mh(density, 2.0);
        burn_in(mh, 100000, rng);
        std::array<std::array<std::int64_t, 5>, 5> flows{};
        int prev = static_cast<int>(mh.next(rng));
        if (prev > 4) prev = 4;
        const std::int64_t n = 10000000;
        for (std::int64_t i = 0; i < n; ++i) {
            int cur = static_cast<int>(mh.next(rng));
            if (cur > 4) cur = 4;
            ++flows[static_cast<std::size_t>(prev)][static_cast<std::size_t>(cur)];
            prev = cur;
        }
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            for (int j = i + 1; j < 5; ++j) {
                const auto fij = static_cast<double>(flows[i][j]);
                const auto fji = static_cast<double>(flows[j][i]);
                if (fij + fji == 0.0) continue;
                const double z = std::abs(fij - fji) / std::sqrt(fij + fji);
                worst = std::max(worst, z);
                if (z > 3.0) ok = false;
            }
        }
        checks.push_back(check("MH discrete detailed balance within 3 sigma", ok,
                               "worst z=" + format_g(worst)));
    }

    // Histogram merge associativity and order invariance.
    {
        RandomStream rng(seed, "merge");
        Histogram whole(-3.0, 3.0, 50);
        Histogram a(-3.0, 3.0, 50), b(-3.0, 3.0, 50), c(-3.0, 3.0, 50);
        for (int i = 0; i < 30000; ++i) {
            const double x = rng.normal();
            whole.add(x);
            (i % 3 == 0 ? a : i % 3 == 1 ? b : c).add(x);
        }
        Histogram ab = a;
        ab.merge(b);
        Histogram abc_left = ab;
        abc_left.merge(c);
        Histogram bc = b;
        bc.merge(c);
        Histogram abc_right = a;
        abc_right.merge(bc);
        bool same = abc_left.n_total() == whole.n_total() &&
                    abc_right.n_total() == whole.n_total();
        for (int bin = 0; bin < 50 && same; ++bin)
            same = abc_left.count(bin) == whole.count(bin) &&
                   abc_right.count(bin) == whole.count(bin);
        checks.push_back(check("histogram merge associative and order-invariant", same,
                               same ? "counts identical" : "counts differ"));
    }

    // Single-worker bit determinism of a small Merton batch.
    {
        const DensitySpec density =
            gaussian_jump_density(GaussianJumpSpec{0.0, 1.0}, 10.0, 8.0);
        JumpDiffusionConfig jd;
        jd.brownian_vol = 1.0;
        jd.intensity = 10.0;
        jd.jump_density = density;
        jd.sampler = AISFKind{64, 1024};
        BatchOptions options;
        options.n_paths = 5000;
        options.bins = 50;
        options.hist_lo = -10.0;
        options.hist_hi = 10.0;
        options.warmup_variates = 1000;
        const BatchResult r1 = simulate_terminal_batch(jd, options, seed);
        const BatchResult r2 = simulate_terminal_batch(jd, options, seed);
        bool same = r1.histogram.n_total() == r2.histogram.n_total();
        for (int bin = 0; bin < 50 && same; ++bin)
            same = r1.histogram.count(bin) == r2.histogram.count(bin);
        checks.push_back(check("single-worker batches are bit-deterministic", same,
                               same ? "histograms identical" : "histograms differ"));
    }

    // Adaptive lambda estimates against the quadrature reference, within 1%.
    {
        auto lambda_case = [&](const std::string& name, const DensitySpec& density,
                               int cells) {
            RandomStream rng(seed, "lambda-" + name);
            AIMHSampler sampler(density, cells);
            burn_in(sampler, 1000000, rng);
            const double estimate = sampler.subdivision()->lambda_estimate();
            const double reference = truncated_intensity(density, 1e-9);
            const double rel = std::abs(estimate - reference) / reference;
            checks.push_back(check("lambda estimate within 1% of quadrature (" + name + ")",
                                   rel <= 0.01,
                                   "estimate=" + format_g(estimate) + " quadrature=" +
                                       format_g(reference) + " rel=" + format_g(rel)));
        };
        lambda_case("gaussian", gaussian_jump_density(GaussianJumpSpec{0.0, 1.0}, 10.0, 8.0),
                    100);
        lambda_case("two-mode", two_mode_density(), 64);
        lambda_case("cgmy", cgmy_levy_density(CGMYSpec{1.0, 1.0, 1.0, 0.5}, 0.005, 25.0),
                    256);
    }

    return checks;
}

int cmd_selftest(const Config& config, std::ostream& log) {
    config.require_known({});
    const auto checks = run_invariant_suite(config.seed());
    print_checks(log, checks);
    return all_pass(checks) ? kExitOk : kExitAcceptanceFailure;
}

} // namespace levysim::cli
