#pragma once

// Special functions used by the fading-channel closed forms: the modified
// Bessel function I0, the first-order Marcum Q-function with its asymptotic
// form and elementary bounds, and the standard normal distribution.
//
// All functions are pure and thread-safe.

namespace onebit::specfun {

/// Arguments of Q1(a, b). Both must be finite and non-negative.
struct MarcumArgs {
    double a = 0.0;
    double b = 0.0;

    void validate() const;
};

/// I0(x) for finite x >= 0. Overflows to +inf beyond x ~ 713; use
/// bessel_i0_scaled there.
double bessel_i0(double x);

/// exp(-x) * I0(x) for finite x >= 0. Never overflows.
double bessel_i0_scaled(double x);

/// J0(x), Bessel function of the first kind of order zero.
double bessel_j0(double x);

/// First-order Marcum Q-function
///
///     Q1(a, b) = integral_b^inf x exp(-(x^2 + a^2) / 2) I0(a x) dx.
///
/// Evaluated as a Poisson mixture of integer-shape upper gamma tails
/// accumulated in log space. For b < a the reflection
/// Q1(a,b) + Q1(b,a) = 1 + exp(-(a^2+b^2)/2) I0(ab) moves the work to the
/// well-conditioned side. When a*b > 1e4 a second-order Gaussian expansion
/// of the large-argument Bessel asymptotic is used instead of the series.
double marcum_q1(MarcumArgs args);

/// Large-argument approximations of Q1 obtained from I0(z) ~ e^z/sqrt(2 pi z).
struct MarcumAsymptotic {
    /// sqrt(b/a) * Phibar(b - a) for b >= a; 1 - sqrt(b/a) * Phibar(a - b) otherwise.
    double gaussian_tail;
    /// (2 pi a b)^(-1/2) exp(-(b - a)^2 / 2), complemented the same way for b < a.
    double leading_term;
};

/// Throws DomainError when a == 0 (the prefactor divides by a).
MarcumAsymptotic marcum_q1_asymptotic(MarcumArgs args);

struct MarcumBounds {
    double lower;
    double upper;
};

/// Elementary exponential bounds on Q1.
///   a < b : [exp(-(b+a)^2/2), exp(-(b-a)^2/2)]
///   b < a : [1 - (exp(-(b-a)^2/2) - exp(-(b+a)^2/2)) / 2, 1]
///   a == b: [exp(-(b+a)^2/2), 1]
MarcumBounds marcum_q1_bounds(MarcumArgs args);

/// Phi(t), the standard normal CDF.
double std_normal_cdf(double t);

/// 1 - Phi(t), computed without cancellation for large t.
double std_normal_sf(double t);

/// Standard normal density.
double std_normal_pdf(double t);

}  // namespace onebit::specfun
