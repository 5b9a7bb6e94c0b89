#include "levysim/jumpdiff.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace levysim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double effective_lambda(const JumpDiffusionConfig& config, const VariateSource& source) {
    if (config.lambda_mode == LambdaMode::kAdaptive) {
        if (const Subdivision* sub = source.subdivision()) return sub->lambda_estimate();
    }
    return config.intensity;
}

} // namespace

std::vector<double> draw_jump_times(double lambda, double T, RandomStream& rng) {
    if (!(lambda > 0.0) || !(T > 0.0))
        throw std::invalid_argument("draw_jump_times: lambda, T > 0 required");
    const std::int64_t n = rng.poisson(lambda * T);
    std::vector<double> times(static_cast<std::size_t>(n));
    for (auto& t : times) t = rng.uniform(0.0, T);
    std::sort(times.begin(), times.end());
    return times;
}

PathSample simulate_terminal(const JumpDiffusionConfig& config, VariateSource& source,
                             PathStreams& streams) {
    if (!(config.horizon > 0.0)) throw std::invalid_argument("simulate_terminal: horizon > 0");
    const double T = config.horizon;

    PathSample path;
    const double lambda = effective_lambda(config, source);
    if (lambda > 0.0) {
        path.jump_times = draw_jump_times(lambda, T, streams.times);
        path.n_jumps = static_cast<std::int64_t>(path.jump_times.size());
        path.jump_values.resize(path.jump_times.size());
        for (auto& v : path.jump_values) {
            v = source.next(streams.sampler);
            path.jump_part += v;
        }
    }
    path.drift_part = config.drift * T;
    path.brownian_part = config.brownian_vol * std::sqrt(T) * streams.brownian.normal();
    path.terminal = path.drift_part + path.brownian_part + path.jump_part;
    return path;
}

BatchResult simulate_terminal_batch(const JumpDiffusionConfig& config,
                                    const BatchOptions& options, std::uint64_t seed,
                                    std::string_view stream_tag) {
    if (options.n_paths < 1)
        throw std::invalid_argument("simulate_terminal_batch: n_paths >= 1 required");
    const double T = config.horizon;
    const double sqrt_T = std::sqrt(T);

    PathStreams streams(seed, stream_tag);
    auto source = make_sampler(config.sampler, config.jump_density);
    burn_in(*source, options.warmup_variates, streams.sampler);

    BatchResult result{Histogram(options.hist_lo, options.hist_hi, options.bins), {}, 0.0, 0.0};
    const bool keep_records = !options.exact_bin_avg.empty();

    const auto t0 = Clock::now();
    double excluded = 0.0; // time spent computing checkpoint records
    std::int64_t next_checkpoint = 1;
    for (std::int64_t p = 1; p <= options.n_paths; ++p) {
        const double lambda = effective_lambda(config, *source);
        result.final_lambda = lambda;

        double jump_part = 0.0;
        const std::int64_t n = streams.jumps.poisson(lambda * T);
        for (std::int64_t j = 0; j < n; ++j) jump_part += source->next(streams.sampler);

        const double terminal = config.drift * T +
                                config.brownian_vol * sqrt_T * streams.brownian.normal() +
                                jump_part;
        result.histogram.add(terminal);

        if (p == next_checkpoint || p == options.n_paths) {
            while (next_checkpoint <= p) next_checkpoint *= 2;
            const double wall = seconds_since(t0) - excluded;
            if (keep_records) {
                const double mark = seconds_since(t0);
                const double err = linf_error(result.histogram, options.exact_bin_avg);
                result.records.push_back({wall, p, err});
                excluded += seconds_since(t0) - mark;
            }
        }
    }
    result.wall_seconds = seconds_since(t0) - excluded;
    return result;
}

JumpDiffusionConfig approximate_infinite_activity(const DensitySpec& truncated_density,
                                                  double eps, double sigma_eps,
                                                  LambdaMode lambda_mode) {
    if (!(eps > 0.0)) throw std::invalid_argument("approximate_infinite_activity: eps > 0");
    if (!(sigma_eps > 0.0))
        throw std::invalid_argument("approximate_infinite_activity: sigma_eps > 0");
    if (truncated_density.excluded_origin_radius != eps)
        throw std::invalid_argument(
            "approximate_infinite_activity: density truncation radius does not match eps");

    JumpDiffusionConfig config;
    config.drift = 0.0;
    config.brownian_vol = sigma_eps;
    config.horizon = 1.0;
    config.jump_density = truncated_density;
    config.lambda_mode = lambda_mode;
    if (lambda_mode == LambdaMode::kFixed) {
        config.intensity = truncated_intensity(truncated_density, 1e-8);
    } else {
        // Midpoint seed estimate; the batch refreshes it from the adapting
        // subdivision as the simulation runs.
        const Subdivision sub = Subdivision::build(truncated_density, 256);
        double sum = 0.0;
        for (const Cell& c : sub.cells()) sum += c.weight;
        config.intensity = sum;
    }
    return config;
}

} // namespace levysim
