#pragma once

// Reference values computed independently of the library, used by the unit
// and acceptance tests.

#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

// e^{-z} I0(z): Boost below 600, the Hankel expansion above where it converges
// to machine precision within a handful of terms.
inline double i0_scaled(double z) {
    if (z < 600.0) return std::exp(-z) * boost::math::cyl_bessel_i(0, z);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * z * k);
        sum += term;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

// Q1(a, b) by adaptive Gauss-Kronrod on the defining integral.
inline double marcum_q1_quadrature(double a, double b) {
    auto f = [a](double x) { return x * std::exp(-0.5 * (x - a) * (x - a)) * i0_scaled(a * x); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    if (b < a) {
        // the integral over [0, b] is small and accurate; complement it
        if (b == 0.0) return 1.0;
        return 1.0 - GK::integrate(f, 0.0, b, 8, 1e-14);
    }
    const double hi = b + 40.0;
    // split at b + 8 so the peak near a is never straddled by one coarse panel
    return GK::integrate(f, b, b + 8.0, 8, 1e-14) + GK::integrate(f, b + 8.0, hi, 8, 1e-14);
}

// Q1(a, b) = Pr(chi'^2_2(a^2) > b^2).
inline double marcum_q1_chi2(double a, double b) {
    if (a == 0.0) return std::exp(-0.5 * b * b);
    boost::math::non_central_chi_squared dist(2.0, a * a);
    return boost::math::cdf(boost::math::complement(dist, b * b));
}

// E1(x) = -Ei(-x).
inline double expint_e1(double x) { return -std::expint(-x); }

// E[log(1 + P X)], X ~ Exp(1): e^{1/P} E1(1/P).
inline double no_csi_rate(double power) { return std::exp(1.0 / power) * expint_e1(1.0 / power); }

// E[log(1 + P (alpha + X))], X ~ Exp(1): the rate with perfect feedback given v^2 >= alpha.
inline double truncated_rate(double power, double alpha) {
    const double c = alpha + 1.0 / power;
    return std::log(power) + std::log(c) + std::exp(c) * expint_e1(c);
}

inline double harmonic(std::int64_t k) {
    double h = 0.0;
    for (std::int64_t i = k; i >= 1; --i) h += 1.0 / static_cast<double>(i);
    return h;
}

// E[log(1 + P max_k X_k)] via the inclusion-exclusion identity
// max of K exponentials = sum_i Exp(1)/i in distribution -> alternating sum.
inline double full_csi_rate(std::int64_t k, double power) {
    double sum = 0.0;
    double binom = 1.0;
    for (std::int64_t j = 1; j <= k; ++j) {
        binom *= static_cast<double>(k - j + 1) / static_cast<double>(j);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        const double c = static_cast<double>(j) / power;
        sum += sign * binom * std::exp(c) * expint_e1(c);
    }
    return sum;
}

}  // namespace oracle
