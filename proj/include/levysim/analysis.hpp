#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace levysim {

// Fixed-range histogram with half-open bins [edge_k, edge_{k+1}) and
// explicit under/overflow counters. n_total counts every added value,
// including out-of-range ones.
class Histogram {
  public:
    Histogram(double lo, double hi, int n_bins);

    void add(double x);

    // Bin-wise count addition; layouts must match.
    void merge(const Histogram& other);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int n_bins() const { return static_cast<int>(counts_.size()); }
    double bin_width() const { return (hi_ - lo_) / static_cast<double>(counts_.size()); }
    double bin_center(int b) const { return lo_ + (b + 0.5) * bin_width(); }
    std::int64_t count(int b) const { return counts_[static_cast<std::size_t>(b)]; }
    std::int64_t n_total() const { return n_total_; }
    std::int64_t n_underflow() const { return n_underflow_; }
    std::int64_t n_overflow() const { return n_overflow_; }

    // Empirical density of bin b: count / (n_total * bin_width).
    double density(int b) const;

  private:
    double lo_;
    double hi_;
    std::vector<std::int64_t> counts_;
    std::int64_t n_total_ = 0;
    std::int64_t n_underflow_ = 0;
    std::int64_t n_overflow_ = 0;
};

// Bin-averaged exact density over each histogram bin (quadrature per bin,
// not a midpoint evaluation). Precompute once and reuse across checkpoints.
std::vector<double> bin_averaged_density(double lo, double hi, int n_bins,
                                         const std::function<double(double)>& exact);

// Max over bins of |empirical density - bin-averaged exact density|.
double linf_error(const Histogram& h, const std::vector<double>& exact_bin_avg);
double linf_error(const Histogram& h, const std::function<double(double)>& exact);

// Fraction of all added values with |x| > threshold: bins fully outside,
// linear attribution for the two partially covered bins, plus the
// under/overflow counters.
double tail_mass(const Histogram& h, double threshold);

struct ConvergenceRecord {
    double wall_seconds = 0.0;
    std::int64_t n_samples = 0;
    double linf_error = 0.0;
};

// CSV emitters. Deterministic field order, 17-significant-digit floats.
void write_histogram_csv(std::ostream& os, const Histogram& h,
                         const std::vector<double>& exact_bin_avg);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records);
void write_curve_csv(std::ostream& os, const std::vector<double>& x,
                     const std::vector<double>& density);

// Error of a convergence stream at a given wall-time budget: the latest
// record not later than t (the last record if none qualify).
double error_at_wall_time(const std::vector<ConvergenceRecord>& records, double t);

} // namespace levysim
