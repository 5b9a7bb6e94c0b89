#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "levysim/measures.hpp"
#include "levysim/rng.hpp"

namespace levysim {

// One subdivision cell U_i with its adaptive accumulators and the AISF
// per-cell clock.
struct Cell {
    double lo = 0.0;
    double hi = 0.0;
    double weight = 0.0;       // current nu~(U_i), unnormalized
    double sup_estimate = 0.0; // running estimate of sup nu over the cell
    double local_clock = 0.0;  // AISF time accumulator t_i
    double sum_nu = 0.0;       // accumulated density evaluations
    std::int64_t count = 0;    // number of accumulated evaluations

    double width() const { return hi - lo; }
};

// Walker alias table: O(n) build, O(1) normalization-free draws.
class AliasTable {
  public:
    AliasTable() = default;

    // Throws std::invalid_argument if no weight is positive or any weight is
    // negative or non-finite.
    static AliasTable build(std::span<const double> weights);

    // One uniform variate and one comparison per draw.
    std::size_t draw(RandomStream& rng) const {
        const double u = rng.uniform01() * static_cast<double>(prob_.size());
        const auto i = static_cast<std::size_t>(u);
        return (u - static_cast<double>(i)) < prob_[i] ? i : alias_[i];
    }

    std::size_t size() const { return prob_.size(); }
    const std::vector<double>& prob() const { return prob_; }
    const std::vector<std::uint32_t>& alias() const { return alias_; }

  private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

// Equal-width disjoint subdivision of Omega minus the excluded origin
// interval, carrying the adaptive discrete distribution nu~ and its alias
// table. Single-owner mutable state: one sampler drives one Subdivision.
class Subdivision {
  public:
    // cells_per_component cells over [lo, hi] when the excluded radius is
    // zero, otherwise that many over each of [lo, -eps] and [eps, hi].
    static Subdivision build(double lo, double hi, double excluded_radius,
                             int cells_per_component, const DensitySpec& density,
                             std::int64_t rebuild_period = kDefaultRebuildPeriod);

    static Subdivision build(const DensitySpec& density, int cells_per_component,
                             std::int64_t rebuild_period = kDefaultRebuildPeriod) {
        return build(density.lo, density.hi, density.excluded_origin_radius,
                     cells_per_component, density, rebuild_period);
    }

    std::size_t draw_cell(RandomStream& rng) const { return alias_.draw(rng); }

    // Accumulates one density evaluation observed in the given cell.
    void record_sample(std::size_t cell, double nu_value);

    bool due_for_adapt() const { return samples_since_rebuild_ >= rebuild_period_; }

    // Re-derives every visited cell's weight from its running mean and
    // rebuilds the alias table. Unvisited cells keep their prior weight.
    void adapt();

    // Current estimate of the truncated intensity: sum of (mean nu x volume)
    // over visited cells plus prior weights of unvisited ones. Throws
    // std::logic_error if no cell has been visited yet.
    double lambda_estimate() const;

    // Index of the cell containing x (half-open cells, shared endpoints).
    std::size_t cell_index(double x) const;

    // Sums another subdivision's accumulators into this one (cross-worker
    // combination); call adapt() afterwards to refresh weights.
    void merge_accumulators(const Subdivision& other);

    // CSV dump: cell_lo,cell_hi,weight,sup_estimate,count
    void dump_csv(std::ostream& os) const;

    const std::vector<Cell>& cells() const { return cells_; }
    Cell& cell(std::size_t i) { return cells_[i]; }
    std::int64_t rebuild_period() const { return rebuild_period_; }
    std::int64_t samples_since_rebuild() const { return samples_since_rebuild_; }

    static constexpr std::int64_t kDefaultRebuildPeriod = 4096;
    static constexpr double kWeightFloor = 1e-300;

  private:
    std::vector<Cell> cells_;
    AliasTable alias_;
    std::int64_t samples_since_rebuild_ = 0;
    std::int64_t rebuild_period_ = kDefaultRebuildPeriod;

    // Geometry for O(1) cell lookup: up to two contiguous components.
    struct Component {
        double lo, hi;
        std::size_t first;
        std::size_t count;
    };
    std::vector<Component> components_;

    void rebuild_alias();
};

} // namespace levysim
