#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace levysim {

// Deterministic seeded variate stream. All distributions are generated from
// explicit formulas on top of mt19937_64 (whose output sequence is fixed by
// the standard), so identical seed + stream name gives an identical variate
// sequence on every platform. Distinct stream names derived from the same
// seed give statistically independent streams.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed, std::string_view name = "")
        : engine_(mix_seed(seed, name)) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        ++n_uniforms_;
        return static_cast<double>(engine_() >> 11) * kInv53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via Box-Muller (no caching of the second variate).
    double normal() {
        const double u1 = positive_uniform();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    double exponential(double mean) { return -mean * std::log(positive_uniform()); }

    // Poisson count by Knuth's product method, chunked so the running
    // product never underflows for large means.
    std::int64_t poisson(double mean) {
        std::int64_t total = 0;
        while (mean > kPoissonChunk) {
            total += poisson_knuth(kPoissonChunk);
            mean -= kPoissonChunk;
        }
        return total + poisson_knuth(mean);
    }

    // Number of uniform variates drawn so far (normals count two).
    std::uint64_t uniform_calls() const { return n_uniforms_; }

  private:
    static constexpr double kInv53 = 1.0 / 9007199254740992.0; // 2^-53
    static constexpr double kPi = 3.14159265358979323846;
    static constexpr double kPoissonChunk = 30.0;

    // Uniform on (0, 1]; safe as a log() argument.
    double positive_uniform() {
        ++n_uniforms_;
        return static_cast<double>((engine_() >> 11) + 1) * kInv53;
    }

    std::int64_t poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double prod = positive_uniform();
        while (prod > limit) {
            ++k;
            prod *= positive_uniform();
        }
        return k;
    }

    static std::uint64_t mix_seed(std::uint64_t seed, std::string_view name) {
        // FNV-1a over the stream name, then one splitmix64 round.
        std::uint64_t h = 14695981039346656037ull;
        for (const char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        std::uint64_t z = seed ^ h;
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    std::uint64_t n_uniforms_ = 0;
};

} // namespace levysim
