#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "levysim/jumpdiff.hpp"
#include "levysim/oracles.hpp"

using namespace levysim;

namespace {

JumpDiffusionConfig merton_config(const SamplerKind& sampler, double lambda = 10.0) {
    JumpDiffusionConfig config;
    config.brownian_vol = 1.0;
    config.intensity = lambda;
    config.jump_density = gaussian_jump_density(GaussianJumpSpec{0.0, 1.0}, lambda, 8.0);
    config.sampler = sampler;
    return config;
}

} // namespace

TEST_CASE("draw_jump_times: Poisson count moments") {
    RandomStream rng(71, "jt-moments");
    const int paths = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int p = 0; p < paths; ++p) {
        const auto times = draw_jump_times(10.0, 1.0, rng);
        const double n = static_cast<double>(times.size());
        sum += n;
        sum2 += n * n;
    }
    const double mean = sum / paths;
    const double var = sum2 / paths - mean * mean;
    CHECK(std::abs(mean - 10.0) < 0.05);
    CHECK(std::abs(var - 10.0) < 0.2);
}

TEST_CASE("draw_jump_times: almost all paths empty as lambda T -> 0") {
    RandomStream rng(72, "jt-empty");
    int empty = 0;
    for (int p = 0; p < 10000; ++p)
        empty += draw_jump_times(0.001, 1.0, rng).empty() ? 1 : 0;
    CHECK(empty >= 9980);
}

TEST_CASE("draw_jump_times: sorted, in range, exponential first inter-arrival") {
    RandomStream rng(73, "jt-ks");
    // One gap per path: pooling every gap would bias the sample because long
    // gaps are more likely to be censored by the horizon. The first arrival
    // time is Exp(lambda) up to the e^(-lambda T) censoring mass.
    std::vector<double> gaps;
    for (int p = 0; p < 10000; ++p) {
        const auto times = draw_jump_times(10.0, 1.0, rng);
        double prev = 0.0;
        for (const double t : times) {
            REQUIRE(t >= prev);
            REQUIRE(t <= 1.0);
            prev = t;
        }
        if (!times.empty()) gaps.push_back(times.front());
    }
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    double d = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double cdf = 1.0 - std::exp(-10.0 * gaps[i]);
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
    }
    CHECK(d * std::sqrt(n) < 1.6276236115189502); // KS 99% level
}

TEST_CASE("simulate_terminal: decomposition adds up exactly") {
    PathStreams streams(81);
    auto config = merton_config(AISFKind{64});
    auto source = make_sampler(config.sampler, config.jump_density);
    for (int i = 0; i < 1000; ++i) {
        const PathSample path = simulate_terminal(config, *source, streams);
        CHECK(path.terminal == path.drift_part + path.brownian_part + path.jump_part);
        CHECK(path.n_jumps == static_cast<std::int64_t>(path.jump_times.size()));
        CHECK(path.n_jumps == static_cast<std::int64_t>(path.jump_values.size()));
        CHECK(std::is_sorted(path.jump_times.begin(), path.jump_times.end()));
        double jump_sum = 0.0;
        for (const double v : path.jump_values) jump_sum += v;
        CHECK(path.jump_part == doctest::Approx(jump_sum).epsilon(1e-15));
    }
}

TEST_CASE("simulate_terminal: pure Brownian variance") {
    PathStreams streams(82);
    JumpDiffusionConfig config;
    config.brownian_vol = 1.0;
    config.intensity = 0.0; // no jumps
    config.jump_density = unit_normal_density(5.0);
    config.sampler = LocalSFKind{};
    auto source = make_sampler(config.sampler, config.jump_density);
    double sum = 0.0, sum2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = simulate_terminal(config, *source, streams).terminal;
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(sum2 / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("simulate_terminal: drift-only path") {
    PathStreams streams(83);
    JumpDiffusionConfig config;
    config.drift = 1.7;
    config.brownian_vol = 0.0;
    config.intensity = 0.0;
    config.horizon = 2.0;
    config.jump_density = unit_normal_density(5.0);
    config.sampler = LocalSFKind{};
    auto source = make_sampler(config.sampler, config.jump_density);
    CHECK(simulate_terminal(config, *source, streams).terminal == 3.4);
}

TEST_CASE("simulate_terminal: Merton variance with iid oracle jumps") {
    PathStreams streams(84);
    IidNormalSource source(0.0, 1.0);
    auto config = merton_config(AISFKind{64});
    double sum = 0.0, sum2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double jump = 0.0;
        const std::int64_t jumps = streams.jumps.poisson(10.0);
        for (std::int64_t j = 0; j < jumps; ++j) jump += source.next(streams.sampler);
        const double x = jump + streams.brownian.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    // Var = sigma^2 T + lambda T (delta^2 + mu^2) = 1 + 10
    CHECK(std::abs(var - 11.0) < 0.2);
    (void)config;
}

TEST_CASE("simulate_terminal_batch: checkpoints, determinism, iid-oracle accuracy") {
    const auto exact = bin_averaged_density(
        -10.0, 10.0, 100, [](double x) { return merton_pdf(x, 1.0, 10.0); });

    BatchOptions options;
    options.n_paths = 20000;
    options.bins = 100;
    options.hist_lo = -10.0;
    options.hist_hi = 10.0;
    options.exact_bin_avg = exact;
    options.warmup_variates = 2000;

    const auto config = merton_config(AISFKind{128});
    const BatchResult r1 = simulate_terminal_batch(config, options, 91);
    const BatchResult r2 = simulate_terminal_batch(config, options, 91);

    SUBCASE("records are monotone in paths_done and end at n_paths") {
        REQUIRE(!r1.records.empty());
        for (std::size_t i = 0; i + 1 < r1.records.size(); ++i) {
            CHECK(r1.records[i].n_samples < r1.records[i + 1].n_samples);
            CHECK(r1.records[i].wall_seconds <= r1.records[i + 1].wall_seconds);
        }
        CHECK(r1.records.back().n_samples == options.n_paths);
        CHECK(r1.histogram.n_total() == options.n_paths);
    }

    SUBCASE("same seed, same config: bit-identical simulation") {
        REQUIRE(r1.records.size() == r2.records.size());
        for (std::size_t i = 0; i < r1.records.size(); ++i) {
            CHECK(r1.records[i].n_samples == r2.records[i].n_samples);
            CHECK(r1.records[i].linf_error == r2.records[i].linf_error);
        }
        for (int b = 0; b < 100; ++b) CHECK(r1.histogram.count(b) == r2.histogram.count(b));
    }

    SUBCASE("error shrinks from early to final checkpoints") {
        CHECK(r1.records.back().linf_error < r1.records.front().linf_error);
    }
}

TEST_CASE("seed-permutation exchangeability: shuffled path order, same histogram") {
    // Jump counts, times, and values drawn for a batch are exchangeable across
    // paths: accumulate the same terminals in a different order.
    PathStreams streams(92);
    IidNormalSource source(0.0, 1.0);
    std::vector<double> terminals;
    for (int p = 0; p < 20000; ++p) {
        double jump = 0.0;
        const std::int64_t jumps = streams.jumps.poisson(10.0);
        for (std::int64_t j = 0; j < jumps; ++j) jump += source.next(streams.sampler);
        terminals.push_back(jump + streams.brownian.normal());
    }
    Histogram forward(-10.0, 10.0, 50);
    Histogram shuffled(-10.0, 10.0, 50);
    for (const double t : terminals) forward.add(t);
    RandomStream shuffle_rng(93, "shuffle");
    std::vector<double> reordered = terminals;
    for (std::size_t i = reordered.size(); i > 1; --i)
        std::swap(reordered[i - 1],
                  reordered[static_cast<std::size_t>(shuffle_rng.uniform01() *
                                                     static_cast<double>(i))]);
    for (const double t : reordered) shuffled.add(t);
    for (int b = 0; b < 50; ++b) CHECK(forward.count(b) == shuffled.count(b));
}

TEST_CASE("approximate_infinite_activity: NIG and CGMY constants") {
    SUBCASE("NIG brownian volatility") {
        const NIGSpec spec = nig_params_from_ct(1.0, 0.0, 0.5);
        const DensitySpec density = nig_levy_density(spec, 0.005, 25.0);
        const double sigma = small_jump_sigma_nig(0.005, spec);
        const auto config =
            approximate_infinite_activity(density, 0.005, sigma, LambdaMode::kAdaptive);
        CHECK(std::abs(config.brownian_vol - 0.067) <= 0.0005);
        CHECK(config.lambda_mode == LambdaMode::kAdaptive);
        // midpoint seed estimate; far below the true 178 because the density
        // is singular at the truncation edge, adaptation corrects it
        CHECK(config.intensity > 10.0);
        CHECK(config.intensity < 260.0);
    }
    SUBCASE("CGMY brownian volatility and fixed quadrature intensity") {
        const CGMYSpec spec{1.0, 1.0, 1.0, 0.5};
        const DensitySpec density = cgmy_levy_density(spec, 0.005, 25.0);
        const double sigma = small_jump_sigma_cgmy(0.005, spec);
        const auto config =
            approximate_infinite_activity(density, 0.005, sigma, LambdaMode::kFixed);
        CHECK(std::abs(config.brownian_vol - 0.022) <= 0.0005);
        CHECK(config.intensity == doctest::Approx(49.761334337).epsilon(1e-6));
    }
    SUBCASE("smaller eps keeps more jumps: lambda grows") {
        const CGMYSpec spec{1.0, 1.0, 1.0, 0.5};
        const auto coarse = approximate_infinite_activity(
            cgmy_levy_density(spec, 0.005, 25.0), 0.005,
            small_jump_sigma_cgmy(0.005, spec), LambdaMode::kFixed);
        const auto fine = approximate_infinite_activity(
            cgmy_levy_density(spec, 0.0025, 25.0), 0.0025,
            small_jump_sigma_cgmy(0.0025, spec), LambdaMode::kFixed);
        CHECK(fine.intensity > coarse.intensity);
    }
    SUBCASE("mismatched truncation radius is rejected") {
        const CGMYSpec spec{1.0, 1.0, 1.0, 0.5};
        const DensitySpec density = cgmy_levy_density(spec, 0.005, 25.0);
        CHECK_THROWS_AS(approximate_infinite_activity(density, 0.01, 0.02,
                                                      LambdaMode::kFixed),
                        std::invalid_argument);
    }
}

TEST_CASE("adaptive lambda mode converges towards the quadrature intensity") {
    const CGMYSpec spec{1.0, 1.0, 1.0, 0.5};
    const DensitySpec density = cgmy_levy_density(spec, 0.005, 25.0);
    const double sigma = small_jump_sigma_cgmy(0.005, spec);
    auto config = approximate_infinite_activity(density, 0.005, sigma, LambdaMode::kAdaptive);
    config.sampler = AISFKind{256};

    BatchOptions options;
    options.n_paths = 20000;
    options.bins = 50;
    options.hist_lo = -6.0;
    options.hist_hi = 6.0;
    options.warmup_variates = 20000;

    const BatchResult result = simulate_terminal_batch(config, options, 94);
    const double reference = truncated_intensity(density, 1e-8);
    CHECK(std::abs(result.final_lambda - reference) / reference < 0.01);
}
