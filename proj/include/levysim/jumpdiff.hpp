#pragma once

#include <cstdint>
#include <vector>

#include "levysim/analysis.hpp"
#include "levysim/measures.hpp"
#include "levysim/rng.hpp"
#include "levysim/samplers.hpp"

namespace levysim {

enum class LambdaMode { kFixed, kAdaptive };

// One simulable jump-diffusion: drift mu t + sigma_B B_t + compound Poisson
// jumps of rate intensity drawn from jump_density through the chosen sampler.
struct JumpDiffusionConfig {
    double drift = 0.0;
    double brownian_vol = 0.0;
    double intensity = 0.0;
    double horizon = 1.0;
    DensitySpec jump_density;
    SamplerKind sampler = LocalMHKind{1.0};
    LambdaMode lambda_mode = LambdaMode::kFixed;
};

struct PathSample {
    double terminal = 0.0;
    double drift_part = 0.0;
    double brownian_part = 0.0;
    double jump_part = 0.0;
    std::vector<double> jump_times;  // sorted ascending in [0, T]
    std::vector<double> jump_values; // consecutive draws of one shared chain
    std::int64_t n_jumps = 0;
};

// All randomness flows from one seed, expanded into named independent
// streams so that enabling or disabling one component never perturbs the
// others' sequences.
struct PathStreams {
    RandomStream jumps;    // Poisson jump counts
    RandomStream times;    // jump-time uniforms
    RandomStream brownian; // terminal Brownian increment
    RandomStream sampler;  // Markov-chain jump sampler

    explicit PathStreams(std::uint64_t seed, std::string_view tag = "")
        : jumps(seed, std::string("jumps") + std::string(tag)),
          times(seed, std::string("times") + std::string(tag)),
          brownian(seed, std::string("brownian") + std::string(tag)),
          sampler(seed, std::string("sampler") + std::string(tag)) {}
};

// N ~ Poisson(lambda T) event times placed uniformly on [0, T], sorted.
std::vector<double> draw_jump_times(double lambda, double T, RandomStream& rng);

// One path terminal with the full decomposition and jump bookkeeping. The
// jump values come from the shared source chain passed in.
PathSample simulate_terminal(const JumpDiffusionConfig& config, VariateSource& source,
                             PathStreams& streams);

struct BatchOptions {
    std::int64_t n_paths = 0;
    int bins = 100;
    double hist_lo = -10.0;
    double hist_hi = 10.0;
    // Bin-averaged oracle density; when empty no convergence records are kept.
    std::vector<double> exact_bin_avg;
    std::int64_t warmup_variates = 10000; // chain prefix discarded before path 1
};

struct BatchResult {
    Histogram histogram;
    std::vector<ConvergenceRecord> records; // checkpoints at powers of two
    double final_lambda = 0.0;              // intensity in effect for the last path
    double wall_seconds = 0.0;              // sampling time, records excluded
};

// Runs n_paths terminals through one persistent jump chain, accumulating the
// terminal histogram and L-infinity error records at geometric checkpoints.
BatchResult simulate_terminal_batch(const JumpDiffusionConfig& config,
                                    const BatchOptions& options, std::uint64_t seed,
                                    std::string_view stream_tag = "");

// Jump-diffusion approximation of an infinite-activity process: Brownian
// volatility sigma_eps replaces the jumps inside (-eps, eps); the passed
// density must already be the truncation of nu to Omega minus that interval.
// Fixed mode pins the intensity by quadrature; adaptive mode seeds it with a
// midpoint estimate that the batch refreshes from the live subdivision.
JumpDiffusionConfig approximate_infinite_activity(const DensitySpec& truncated_density,
                                                  double eps, double sigma_eps,
                                                  LambdaMode lambda_mode);

} // namespace levysim
