#include "levysim/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "levysim/quadrature.hpp"

namespace levysim {

Histogram::Histogram(double lo, double hi, int n_bins) : lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw std::invalid_argument("Histogram: requires lo < hi");
    if (n_bins < 1) throw std::invalid_argument("Histogram: requires n_bins >= 1");
    counts_.assign(static_cast<std::size_t>(n_bins), 0);
}

void Histogram::add(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("Histogram::add: non-finite value");
    ++n_total_;
    if (x < lo_) {
        ++n_underflow_;
        return;
    }
    if (x >= hi_) {
        ++n_overflow_;
        return;
    }
    auto b = static_cast<std::size_t>((x - lo_) / (hi_ - lo_) *
                                      static_cast<double>(counts_.size()));
    if (b >= counts_.size()) b = counts_.size() - 1; // rounding guard below hi
    ++counts_[b];
}

void Histogram::merge(const Histogram& other) {
    if (other.lo_ != lo_ || other.hi_ != hi_ || other.counts_.size() != counts_.size())
        throw std::invalid_argument("Histogram::merge: incompatible layouts");
    for (std::size_t b = 0; b < counts_.size(); ++b) counts_[b] += other.counts_[b];
    n_total_ += other.n_total_;
    n_underflow_ += other.n_underflow_;
    n_overflow_ += other.n_overflow_;
}

double Histogram::density(int b) const {
    if (n_total_ == 0) throw std::logic_error("Histogram::density: empty histogram");
    return static_cast<double>(counts_[static_cast<std::size_t>(b)]) /
           (static_cast<double>(n_total_) * bin_width());
}

std::vector<double> bin_averaged_density(double lo, double hi, int n_bins,
                                         const std::function<double(double)>& exact) {
    std::vector<double> avg(static_cast<std::size_t>(n_bins));
    const double w = (hi - lo) / n_bins;
    for (int b = 0; b < n_bins; ++b) {
        const double a = lo + b * w;
        avg[static_cast<std::size_t>(b)] = integrate(exact, a, a + w, 1e-12) / w;
    }
    return avg;
}

double linf_error(const Histogram& h, const std::vector<double>& exact_bin_avg) {
    if (h.n_total() == 0) throw std::logic_error("linf_error: empty histogram");
    if (exact_bin_avg.size() != static_cast<std::size_t>(h.n_bins()))
        throw std::invalid_argument("linf_error: bin count mismatch");
    double worst = 0.0;
    for (int b = 0; b < h.n_bins(); ++b)
        worst = std::max(worst, std::abs(h.density(b) - exact_bin_avg[static_cast<std::size_t>(b)]));
    return worst;
}

double linf_error(const Histogram& h, const std::function<double(double)>& exact) {
    return linf_error(h, bin_averaged_density(h.lo(), h.hi(), h.n_bins(), exact));
}

double tail_mass(const Histogram& h, double threshold) {
    if (!(threshold > 0.0 && threshold < h.hi()))
        throw std::invalid_argument("tail_mass: threshold must lie in (0, hi)");
    if (h.n_total() == 0) throw std::logic_error("tail_mass: empty histogram");
    const double w = h.bin_width();
    double tail = static_cast<double>(h.n_underflow() + h.n_overflow());
    for (int b = 0; b < h.n_bins(); ++b) {
        const double a = h.lo() + b * w;
        const double c = a + w;
        // Overlap fraction of the bin with {|x| > threshold}.
        double outside = 0.0;
        if (c <= -threshold || a >= threshold) {
            outside = 1.0;
        } else {
            if (a < -threshold) outside += (-threshold - a) / w;
            if (c > threshold) outside += (c - threshold) / w;
        }
        tail += outside * static_cast<double>(h.count(b));
    }
    return tail / static_cast<double>(h.n_total());
}

namespace {

void put(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

} // namespace

void write_histogram_csv(std::ostream& os, const Histogram& h,
                         const std::vector<double>& exact_bin_avg) {
    os << "bin_center,empirical_density,exact_density\n";
    for (int b = 0; b < h.n_bins(); ++b) {
        put(os, h.bin_center(b));
        os << ',';
        put(os, h.density(b));
        os << ',';
        put(os, exact_bin_avg[static_cast<std::size_t>(b)]);
        os << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records) {
    os << "wall_seconds,n_samples,linf_error\n";
    for (const ConvergenceRecord& r : records) {
        put(os, r.wall_seconds);
        os << ',' << r.n_samples << ',';
        put(os, r.linf_error);
        os << '\n';
    }
}

void write_curve_csv(std::ostream& os, const std::vector<double>& x,
                     const std::vector<double>& density) {
    os << "x,density\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        put(os, x[i]);
        os << ',';
        put(os, density[i]);
        os << '\n';
    }
}

double error_at_wall_time(const std::vector<ConvergenceRecord>& records, double t) {
    if (records.empty()) throw std::invalid_argument("error_at_wall_time: no records");
    double err = records.front().linf_error;
    for (const ConvergenceRecord& r : records) {
        if (r.wall_seconds <= t) err = r.linf_error;
    }
    return err;
}

} // namespace levysim
