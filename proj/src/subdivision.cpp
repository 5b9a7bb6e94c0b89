#include "levysim/subdivision.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace levysim {

AliasTable AliasTable::build(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty weight vector");

    double sum = 0.0;
    for (const double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("AliasTable: weights must be finite and nonnegative");
        sum += w;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("AliasTable: all weights are zero");

    AliasTable table;
    table.prob_.resize(n);
    table.alias_.resize(n);

    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / sum;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }

    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        const std::uint32_t l = large.back();
        small.pop_back();
        table.prob_[s] = scaled[s];
        table.alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers are probability one up to rounding.
    for (const std::uint32_t i : large) {
        table.prob_[i] = 1.0;
        table.alias_[i] = i;
    }
    for (const std::uint32_t i : small) {
        table.prob_[i] = 1.0;
        table.alias_[i] = i;
    }
    return table;
}

Subdivision Subdivision::build(double lo, double hi, double excluded_radius,
                               int cells_per_component, const DensitySpec& density,
                               std::int64_t rebuild_period) {
    if (!(lo < hi)) throw std::invalid_argument("Subdivision: requires lo < hi");
    if (cells_per_component < 1) throw std::invalid_argument("Subdivision: needs >= 1 cell");
    if (excluded_radius < 0.0) throw std::invalid_argument("Subdivision: negative excluded radius");
    if (rebuild_period < 1) throw std::invalid_argument("Subdivision: rebuild_period >= 1");

    Subdivision sub;
    sub.rebuild_period_ = rebuild_period;

    auto add_component = [&](double a, double b) {
        if (!(a < b))
            throw std::invalid_argument("Subdivision: excluded interval leaves no room");
        const std::size_t n = static_cast<std::size_t>(cells_per_component);
        const std::size_t first = sub.cells_.size();
        for (std::size_t i = 0; i < n; ++i) {
            Cell cell;
            // Shared endpoints: both neighbours evaluate the same expression.
            cell.lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
            cell.hi = (i + 1 == n) ? b
                                   : a + (b - a) * static_cast<double>(i + 1) /
                                             static_cast<double>(n);
            if (!(cell.lo < cell.hi))
                throw std::invalid_argument("Subdivision: cell width underflows");
            const double mid = 0.5 * (cell.lo + cell.hi);
            const double nu_mid = density.evaluate(mid);
            cell.weight = std::max(nu_mid * cell.width(), kWeightFloor);
            cell.sup_estimate = nu_mid;
            sub.cells_.push_back(cell);
        }
        sub.components_.push_back({a, b, first, n});
    };

    if (excluded_radius > 0.0) {
        add_component(lo, -excluded_radius);
        add_component(excluded_radius, hi);
    } else {
        add_component(lo, hi);
    }
    sub.rebuild_alias();
    return sub;
}

void Subdivision::record_sample(std::size_t cell, double nu_value) {
    if (!std::isfinite(nu_value) || nu_value < 0.0)
        throw std::invalid_argument("record_sample: nu value must be finite and nonnegative");
    Cell& c = cells_[cell];
    c.sum_nu += nu_value;
    c.count += 1;
    if (nu_value > c.sup_estimate) c.sup_estimate = nu_value;
    ++samples_since_rebuild_;
}

void Subdivision::adapt() {
    for (Cell& c : cells_) {
        if (c.count > 0) {
            const double mean = c.sum_nu / static_cast<double>(c.count);
            c.weight = std::max(mean * c.width(), kWeightFloor);
        }
    }
    rebuild_alias();
    samples_since_rebuild_ = 0;
}

double Subdivision::lambda_estimate() const {
    bool visited = false;
    double sum = 0.0;
    for (const Cell& c : cells_) {
        if (c.count > 0) {
            visited = true;
            sum += c.sum_nu / static_cast<double>(c.count) * c.width();
        } else {
            sum += c.weight;
        }
    }
    if (!visited) throw std::logic_error("lambda_estimate: no cell visited yet");
    return sum;
}

std::size_t Subdivision::cell_index(double x) const {
    for (const Component& comp : components_) {
        if (x < comp.lo || x > comp.hi) continue;
        const double frac = (x - comp.lo) / (comp.hi - comp.lo);
        auto i = static_cast<std::size_t>(frac * static_cast<double>(comp.count));
        if (i >= comp.count) i = comp.count - 1;
        std::size_t idx = comp.first + i;
        // Rounding guard around shared endpoints.
        while (idx > comp.first && x < cells_[idx].lo) --idx;
        while (idx + 1 < comp.first + comp.count && x >= cells_[idx].hi) ++idx;
        return idx;
    }
    throw std::domain_error("cell_index: position outside the subdivision");
}

void Subdivision::merge_accumulators(const Subdivision& other) {
    if (other.cells_.size() != cells_.size())
        throw std::invalid_argument("merge_accumulators: cell layouts differ");
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        cells_[i].sum_nu += other.cells_[i].sum_nu;
        cells_[i].count += other.cells_[i].count;
        if (other.cells_[i].sup_estimate > cells_[i].sup_estimate)
            cells_[i].sup_estimate = other.cells_[i].sup_estimate;
    }
}

void Subdivision::rebuild_alias() {
    std::vector<double> weights;
    weights.reserve(cells_.size());
    for (const Cell& c : cells_) weights.push_back(c.weight);
    alias_ = AliasTable::build(weights);
}

void Subdivision::dump_csv(std::ostream& os) const {
    os << "cell_lo,cell_hi,weight,sup_estimate,count\n";
    char line[160];
    for (const Cell& c : cells_) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%lld\n", c.lo, c.hi,
                      c.weight, c.sup_estimate, static_cast<long long>(c.count));
        os << line;
    }
}

} // namespace levysim
