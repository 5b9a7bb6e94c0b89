#include "levysim/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace levysim {

namespace {

bool in_domain(const DensitySpec& density, double x) {
    if (x < density.lo || x > density.hi) return false;
    const double eps = density.excluded_origin_radius;
    return eps == 0.0 || std::abs(x) >= eps;
}

// Deterministic starting point: the paper's s0 = 0 when it is admissible,
// otherwise the midpoint of the positive component.
double initial_position(const DensitySpec& density) {
    if (in_domain(density, 0.0)) return 0.0;
    const double a = std::max(density.lo, density.excluded_origin_radius);
    return 0.5 * (a + density.hi);
}

// Uniform draw over Omega minus the excluded origin interval.
double draw_position(const DensitySpec& density, RandomStream& rng) {
    const double eps = density.excluded_origin_radius;
    if (eps <= 0.0) return rng.uniform(density.lo, density.hi);
    const double left = -eps - density.lo;
    const double right = density.hi - eps;
    const double u = rng.uniform01() * (left + right);
    return u < left ? density.lo + u : eps + (u - left);
}

} // namespace

LocalMHSampler::LocalMHSampler(DensitySpec density, double width)
    : density_(std::move(density)), width_(width) {
    if (!(width_ > 0.0)) throw std::invalid_argument("LocalMHSampler: width > 0 required");
    current_ = initial_position(density_);
    current_density_ = density_.evaluate(current_);
    if (!(current_density_ > 0.0))
        throw std::invalid_argument("LocalMHSampler: zero density at the initial state");
}

double LocalMHSampler::next(RandomStream& rng) {
    ++proposal_count_;
    const double y = current_ + rng.uniform(-0.5 * width_, 0.5 * width_);
    if (!in_domain(density_, y)) return current_; // rejected, counted
    if (current_density_ <= 0.0)
        throw std::runtime_error("LocalMHSampler: zero density at current state");
    const double fy = density_.evaluate(y);
    if (fy >= current_density_ || rng.uniform01() * current_density_ < fy) {
        current_ = y;
        current_density_ = fy;
        ++accept_count_;
    }
    return current_;
}

LocalSFSampler::LocalSFSampler(DensitySpec density, double grid_dt, bool exponential_resting)
    : density_(std::move(density)),
      grid_dt_(grid_dt),
      exponential_resting_(exponential_resting),
      auto_grid_(grid_dt <= 0.0) {
    if (auto_grid_) grid_dt_ = estimated_sup(density_) * (1.0 + 1e-7);
    if (!(grid_dt_ > 0.0)) throw std::invalid_argument("LocalSFSampler: grid_dt > 0 required");
    current_ = initial_position(density_);
    // The initial position occupies [0, nu(s0)); grid outputs start at grid_dt.
    residual_ = in_domain(density_, 0.0) ? density_.evaluate(current_) : 0.0;
}

double LocalSFSampler::estimated_sup(const DensitySpec& density) {
    if (density.sup_hint) return *density.sup_hint;
    const double eps = density.excluded_origin_radius;
    double sup = 0.0;
    auto scan = [&](double a, double b) {
        if (!(a < b)) return;
        const int n = 10000;
        for (int i = 0; i < n; ++i)
            sup = std::max(sup, density.evaluate(a + (b - a) * (i + 0.5) / n));
    };
    if (eps > 0.0) {
        scan(density.lo, -eps);
        scan(eps, density.hi);
    } else {
        scan(density.lo, density.hi);
    }
    return sup * 1.1;
}

double LocalSFSampler::next(RandomStream& rng) {
    double need = grid_dt_;
    while (residual_ < need) {
        need -= residual_;
        current_ = draw_position(density_, rng);
        const double nu = density_.evaluate(current_);
        if (nu > max_observed_) {
            max_observed_ = nu;
            // Adaptive sup estimate: keep the grid coarser than every
            // observed density value so repeats stay impossible.
            if (auto_grid_ && nu > grid_dt_) grid_dt_ = nu * (1.0 + 1e-7);
        }
        residual_ = exponential_resting_ ? rng.exponential(nu) : nu;
    }
    residual_ -= need;
    return current_;
}

AIMHSampler::AIMHSampler(DensitySpec density, int cells_per_component,
                         std::int64_t rebuild_period)
    : density_(std::move(density)),
      sub_(Subdivision::build(density_, cells_per_component, rebuild_period)) {}

void AIMHSampler::initialize(RandomStream& rng) {
    initialized_ = true;
    if (in_domain(density_, 0.0)) {
        current_ = 0.0;
        current_density_ = density_.evaluate(0.0);
        if (current_density_ > 0.0) return;
    }
    const std::size_t i = sub_.draw_cell(rng);
    const Cell& c = sub_.cells()[i];
    current_ = rng.uniform(c.lo, c.hi);
    current_density_ = density_.evaluate(current_);
    sub_.record_sample(i, current_density_);
}

double AIMHSampler::proposal_density(double x) const {
    const Cell& c = sub_.cells()[sub_.cell_index(x)];
    return c.weight / c.width();
}

double AIMHSampler::next(RandomStream& rng) {
    if (!initialized_) initialize(rng);

    const std::size_t i = sub_.draw_cell(rng);
    const Cell& c = sub_.cells()[i];
    const double y = rng.uniform(c.lo, c.hi);
    const double fy = density_.evaluate(y);
    sub_.record_sample(i, fy);

    const double qy = c.weight / c.width();
    const double qx = proposal_density(current_);
    if (!(qx > 0.0))
        throw std::runtime_error("AIMHSampler: proposal weight collapsed at current state");

    ++proposal_count_;
    bool accept;
    if (current_density_ <= 0.0) {
        accept = fy > 0.0; // recover from a zero-density initial state
    } else {
        const double ratio = (fy / qy) * (qx / current_density_);
        accept = ratio >= 1.0 || rng.uniform01() < ratio;
    }
    if (accept) {
        current_ = y;
        current_density_ = fy;
        ++accept_count_;
    }
    if (sub_.due_for_adapt()) sub_.adapt();
    return current_;
}

AISFSampler::AISFSampler(DensitySpec density, int cells_per_component,
                         std::int64_t rebuild_period, std::int64_t max_iterations)
    : density_(std::move(density)),
      sub_(Subdivision::build(density_, cells_per_component, rebuild_period)),
      max_iterations_(max_iterations) {}

double AISFSampler::next(RandomStream& rng) {
    const std::size_t i = sub_.draw_cell(rng);
    Cell& c = sub_.cell(i);
    double x = c.lo;
    std::int64_t iterations = 0;
    do {
        if (++iterations > max_iterations_)
            throw std::runtime_error("AISFSampler: iteration bound exceeded in a cell");
        x = rng.uniform(c.lo, c.hi);
        const double nu = density_.evaluate(x);
        sub_.record_sample(i, nu);
        c.local_clock += nu;
    } while (c.local_clock <= c.sup_estimate);
    c.local_clock -= c.sup_estimate;
    if (sub_.due_for_adapt()) sub_.adapt();
    return x;
}

double correlation(std::span<const double> chain) {
    const std::size_t n = chain.size();
    if (n < 2) throw std::invalid_argument("correlation: need at least two values");
    double mean = 0.0;
    for (const double x : chain) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const double x : chain) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    if (!(var > 0.0)) throw std::domain_error("correlation: zero variance chain");
    double cov = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) cov += (chain[i] - mean) * (chain[i + 1] - mean);
    cov /= static_cast<double>(n - 1);
    return cov / var;
}

void burn_in(VariateSource& source, std::int64_t n, RandomStream& rng) {
    for (std::int64_t i = 0; i < n; ++i) source.next(rng);
}

std::unique_ptr<VariateSource> make_sampler(const SamplerKind& kind,
                                            const DensitySpec& density) {
    return std::visit(
        [&](const auto& k) -> std::unique_ptr<VariateSource> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, LocalMHKind>) {
                return std::make_unique<LocalMHSampler>(density, k.width);
            } else if constexpr (std::is_same_v<T, LocalSFKind>) {
                return std::make_unique<LocalSFSampler>(density, k.grid_dt,
                                                        k.exponential_resting);
            } else if constexpr (std::is_same_v<T, AIMHKind>) {
                return std::make_unique<AIMHSampler>(density, k.cells_per_component,
                                                     k.rebuild_period);
            } else {
                return std::make_unique<AISFSampler>(density, k.cells_per_component,
                                                     k.rebuild_period);
            }
        },
        kind);
}

std::vector<WidthCorrelation> mh_width_sweep(const DensitySpec& density,
                                             std::span<const double> widths, std::int64_t n,
                                             RandomStream& rng) {
    if (n < 100000) throw std::invalid_argument("mh_width_sweep: n >= 1e5 required");
    for (const double w : widths)
        if (!(w > 0.0)) throw std::invalid_argument("mh_width_sweep: widths must be positive");

    std::vector<double> chain(static_cast<std::size_t>(n));
    std::vector<WidthCorrelation> result;
    result.reserve(widths.size());
    for (const double w : widths) {
        LocalMHSampler sampler(density, w);
        burn_in(sampler, 10000, rng);
        for (auto& x : chain) x = sampler.next(rng);
        result.push_back({w, correlation(chain)});
    }
    return result;
}

} // namespace levysim
