#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "levysim/measures.hpp"
#include "levysim/rng.hpp"
#include "levysim/subdivision.hpp"

namespace levysim {

// Sampler selection for configuration surfaces.
struct LocalMHKind {
    double width; // full support width of the centered uniform proposal
};
struct LocalSFKind {
    double grid_dt = 0.0; // 0 = auto: estimated sup nu, slightly inflated
    bool exponential_resting = false;
};
struct AIMHKind {
    int cells_per_component = 256;
    std::int64_t rebuild_period = Subdivision::kDefaultRebuildPeriod;
};
struct AISFKind {
    int cells_per_component = 256;
    std::int64_t rebuild_period = Subdivision::kDefaultRebuildPeriod;
};
using SamplerKind = std::variant<LocalMHKind, LocalSFKind, AIMHKind, AISFKind>;

// Common interface for anything that produces a stream of jump variates.
class VariateSource {
  public:
    virtual ~VariateSource() = default;
    virtual double next(RandomStream& rng) = 0;
    // Non-null for the adaptive samplers that own a Subdivision.
    virtual const Subdivision* subdivision() const { return nullptr; }
};

// Random-walk Metropolis/Hastings with a centered uniform proposal of the
// given width. Out-of-domain proposals are rejected and counted.
class LocalMHSampler : public VariateSource {
  public:
    LocalMHSampler(DensitySpec density, double width);

    double next(RandomStream& rng) override;

    double acceptance_rate() const {
        return proposal_count_ == 0
                   ? 0.0
                   : static_cast<double>(accept_count_) / static_cast<double>(proposal_count_);
    }
    std::int64_t proposal_count() const { return proposal_count_; }
    std::int64_t accept_count() const { return accept_count_; }
    double current() const { return current_; }

  private:
    DensitySpec density_;
    double width_;
    double current_ = 0.0;
    double current_density_ = 0.0;
    std::int64_t accept_count_ = 0;
    std::int64_t proposal_count_ = 0;
};

// Stochastic step function with independent uniform proposals over Omega,
// sampled on a uniform time grid of spacing grid_dt. Resting time at s is
// nu(s), or exponential with mean nu(s) in the randomized variant.
class LocalSFSampler : public VariateSource {
  public:
    LocalSFSampler(DensitySpec density, double grid_dt = 0.0,
                   bool exponential_resting = false);

    double next(RandomStream& rng) override;

    double grid_dt() const { return grid_dt_; }
    double max_observed_density() const { return max_observed_; }

    // Scan-based sup estimate used when the density carries no hint.
    static double estimated_sup(const DensitySpec& density);

  private:
    DensitySpec density_;
    double grid_dt_;
    bool exponential_resting_;
    bool auto_grid_; // grow grid_dt if an observed nu value ever exceeds it
    double current_ = 0.0;
    double residual_ = 0.0; // resting time left for the current position
    double max_observed_ = 0.0;
};

// Adaptive independent MH: cells drawn through the alias table, positions
// uniform within the cell, standard accept/reject against the
// piecewise-constant proposal density.
class AIMHSampler : public VariateSource {
  public:
    AIMHSampler(DensitySpec density, int cells_per_component = 256,
                std::int64_t rebuild_period = Subdivision::kDefaultRebuildPeriod);

    double next(RandomStream& rng) override;

    double acceptance_rate() const {
        return proposal_count_ == 0
                   ? 0.0
                   : static_cast<double>(accept_count_) / static_cast<double>(proposal_count_);
    }
    // Resets the acceptance counters (epoch-wise diagnostics).
    void reset_counters() { accept_count_ = proposal_count_ = 0; }
    const Subdivision* subdivision() const override { return &sub_; }

  private:
    DensitySpec density_;
    Subdivision sub_;
    bool initialized_ = false;
    double current_ = 0.0;
    double current_density_ = 0.0;
    std::int64_t accept_count_ = 0;
    std::int64_t proposal_count_ = 0;

    void initialize(RandomStream& rng);
    double proposal_density(double x) const;
};

// Adaptive independent SF: per-cell local clocks and sup estimates; a cell
// entry draws positions until its clock exceeds the cell's sup estimate.
// Produces an uncorrelated stream once adapted.
class AISFSampler : public VariateSource {
  public:
    AISFSampler(DensitySpec density, int cells_per_component = 256,
                std::int64_t rebuild_period = Subdivision::kDefaultRebuildPeriod,
                std::int64_t max_iterations = 1000000);

    double next(RandomStream& rng) override;

    const Subdivision* subdivision() const override { return &sub_; }

  private:
    DensitySpec density_;
    Subdivision sub_;
    std::int64_t max_iterations_;
};

// I.i.d. normal jump source (known-good generator) used as the oracle
// stand-in for a Markov-chain jump sampler.
class IidNormalSource : public VariateSource {
  public:
    IidNormalSource(double mean, double stddev) : mean_(mean), stddev_(stddev) {}
    double next(RandomStream& rng) override { return mean_ + stddev_ * rng.normal(); }

  private:
    double mean_;
    double stddev_;
};

// Lag-1 sequential correlation of a chain, using the chain mean and the
// biased variance. Throws on chains shorter than 2 or with zero variance.
double correlation(std::span<const double> chain);

// Discards n draws from a source (burn-in before measurements).
void burn_in(VariateSource& source, std::int64_t n, RandomStream& rng);

// Builds a sampler instance for a SamplerKind.
std::unique_ptr<VariateSource> make_sampler(const SamplerKind& kind,
                                            const DensitySpec& density);

struct WidthCorrelation {
    double width;
    double correlation;
};

// Lag-1 correlation of the local MH chain as a function of proposal width,
// n steps per width after a 10^4-step burn-in.
std::vector<WidthCorrelation> mh_width_sweep(const DensitySpec& density,
                                             std::span<const double> widths, std::int64_t n,
                                             RandomStream& rng);

} // namespace levysim
