#pragma once

#include <functional>

namespace onebit::specfun {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;
    /// Truncation target for the tail beyond the finite cutoff.
    double tail_cutoff_tol = 1e-12;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    /// Right end of the finite range that was actually integrated.
    double upper = 0.0;
};

using Integrand = std::function<double(double)>;

/// Upper bound on |integral_z^inf f| as a function of the cutoff z.
/// Must be nonincreasing in z and tend to zero.
using TailBound = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod integration on [lo, hi].
/// Throws ConvergenceError when the subdivision budget runs out.
QuadratureResult integrate_finite(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec = {});

/// Integral of f on [lower, inf).
///
/// With a tail bound, the cutoff is grown until tail(z) < tail_cutoff_tol.
/// Without one, panels of doubling width are appended until two
/// consecutive panels contribute less than tail_cutoff_tol, which is
/// sound for integrands with a sub-Gaussian envelope.
QuadratureResult integrate_semi_infinite_ex(const Integrand& f, double lower,
                                            const QuadratureSpec& spec = {},
                                            const TailBound& tail = {});

double integrate_semi_infinite(const Integrand& f, double lower,
                               const QuadratureSpec& spec = {},
                               const TailBound& tail = {});

}  // namespace onebit::specfun
