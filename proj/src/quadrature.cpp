#include "levysim/quadrature.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace levysim {

namespace {

struct Panel {
    double a, b;
    double fa, fl, fm, fr, fb; // values at a, a+h/4, midpoint, b-h/4, b
    double coarse;             // Simpson over [a, b]
    double fine;               // Simpson over the two halves
    double error;              // |fine - coarse|
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

} // namespace

double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    if (!(spec.a < spec.b)) throw std::invalid_argument("integrate: requires a < b");
    if (!(spec.abs_tol > 0.0)) throw std::invalid_argument("integrate: requires abs_tol > 0");

    auto eval = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v)) throw std::runtime_error("integrate: non-finite integrand value");
        return v;
    };

    auto make_panel = [&](double a, double b, double fa, double fm, double fb) {
        Panel p{a, b, fa, 0.0, fm, 0.0, fb, 0.0, 0.0, 0.0};
        const double m = 0.5 * (a + b);
        p.fl = eval(0.5 * (a + m));
        p.fr = eval(0.5 * (m + b));
        p.coarse = simpson(a, b, fa, fm, fb);
        p.fine = simpson(a, m, fa, p.fl, fm) + simpson(m, b, fm, p.fr, fb);
        p.error = std::abs(p.fine - p.coarse);
        return p;
    };

    auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);

    queue.push(make_panel(spec.a, spec.b, eval(spec.a), eval(0.5 * (spec.a + spec.b)),
                          eval(spec.b)));

    double total_error = queue.top().error;
    for (int refinement = 0; total_error > spec.abs_tol; ++refinement) {
        if (refinement >= spec.max_refinements)
            throw std::runtime_error("integrate: tolerance not met within max_refinements");

        Panel p = queue.top();
        queue.pop();
        total_error -= p.error;

        const double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b) {
            // Interval at floating-point resolution; accept its estimate as is.
            p.error = 0.0;
            queue.push(p);
            continue;
        }
        const Panel left = make_panel(p.a, m, p.fa, p.fl, p.fm);
        const Panel right = make_panel(m, p.b, p.fm, p.fr, p.fb);
        total_error += left.error + right.error;
        queue.push(left);
        queue.push(right);
    }

    double sum = 0.0;
    while (!queue.empty()) {
        sum += queue.top().fine;
        queue.pop();
    }
    return sum;
}

} // namespace levysim
