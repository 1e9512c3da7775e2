#include "onebit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "onebit/error.hpp"

namespace onebit::specfun {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr double kRoundoffFactor = 50.0 * std::numeric_limits<double>::epsilon();

struct Panel {
    double lo;
    double hi;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const Integrand& f, double lo, double hi) {
    // mapped onto [-1, 1] by hand: some Boost releases leave the error unscaled
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double error = 0.0;
    double l1 = 0.0;
    const double value =
        half * Rule::integrate([&](double t) { return f(mid + half * t); }, -1.0, 1.0, 0, 0.0, &error, &l1);
    error *= half;
    l1 *= half;
    // |K15 - G7| cannot resolve below roundoff of the absolute integral
    error = std::max(error, kRoundoffFactor * std::abs(l1));
    return {lo, hi, value, error};
}

double target(const QuadratureSpec& spec, double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// Panel sums are recomputed from scratch to avoid drift from repeated
// add/subtract of panel contributions.
void totals(const std::priority_queue<Panel>& heap, double& value, double& error) {
    auto copy = heap;
    value = 0.0;
    error = 0.0;
    while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
    }
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_cutoff_tol > 0.0)) {
        throw DomainError("QuadratureSpec: tolerances must be strictly positive");
    }
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

QuadratureResult integrate_finite(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("integrate_finite: limits must be finite");
    }
    if (lo == hi) return {0.0, 0.0, 0, hi};
    if (hi < lo) {
        auto flipped = integrate_finite(f, hi, lo, spec);
        flipped.value = -flipped.value;
        flipped.upper = hi;
        return flipped;
    }

    std::priority_queue<Panel> heap;
    heap.push(evaluate_panel(f, lo, hi));
    double value = heap.top().value;
    double error = heap.top().error;
    int subdivisions = 0;

    while (error > target(spec, value)) {
        if (subdivisions >= spec.max_subdivisions) {
            std::ostringstream msg;
            msg << "integrate_finite: subdivision budget (" << spec.max_subdivisions
                << ") exhausted on [" << lo << ", " << hi << "]; estimate " << value
                << " +/- " << error;
            throw ConvergenceError(msg.str(), value, error);
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = evaluate_panel(f, worst.lo, mid);
        const Panel right = evaluate_panel(f, mid, worst.hi);
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (subdivisions % 64 == 0) totals(heap, value, error);
    }
    totals(heap, value, error);
    return {value, error, subdivisions, hi};
}

QuadratureResult integrate_semi_infinite_ex(const Integrand& f, double lower,
                                            const QuadratureSpec& spec, const TailBound& tail) {
    spec.validate();
    if (!std::isfinite(lower)) throw DomainError("integrate_semi_infinite: lower must be finite");

    double upper = lower + 1.0;
    if (tail) {
        double width = 1.0;
        while (tail(upper) >= spec.tail_cutoff_tol) {
            width *= 1.5;
            upper = lower + width;
            if (width > 1e6) {
                throw ConvergenceError("integrate_semi_infinite: tail bound never dropped below "
                                       "tail_cutoff_tol",
                                       std::numeric_limits<double>::quiet_NaN(),
                                       std::numeric_limits<double>::infinity());
            }
        }
    } else {
        double width = 1.0;
        int quiet_panels = 0;
        while (quiet_panels < 2) {
            const Panel probe = evaluate_panel(f, upper, upper + width);
            if (std::abs(probe.value) + probe.error < spec.tail_cutoff_tol) {
                ++quiet_panels;
            } else {
                quiet_panels = 0;
            }
            upper += width;
            width *= 2.0;
            if (width > 1e6) {
                throw ConvergenceError("integrate_semi_infinite: integrand does not decay",
                                       std::numeric_limits<double>::quiet_NaN(),
                                       std::numeric_limits<double>::infinity());
            }
        }
    }

    auto result = integrate_finite(f, lower, upper, spec);
    result.error += spec.tail_cutoff_tol;
    return result;
}

double integrate_semi_infinite(const Integrand& f, double lower, const QuadratureSpec& spec,
                               const TailBound& tail) {
    return integrate_semi_infinite_ex(f, lower, spec, tail).value;
}

}  // namespace onebit::specfun
