#include "onebit/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "onebit/error.hpp"

namespace onebit::specfun {

namespace {

constexpr double kSeriesSwitch = 30.0;     // I0: power series below, asymptotic above
constexpr double kMarcumLargeArg = 1e4;    // a*b beyond which the series is skipped
constexpr double kSeriesRelTol = 1e-17;
constexpr long kMarcumMaxTerms = 50'000'000;

double log_add_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(-std::abs(x - y)));
}

void require_nonneg_finite(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError(std::string(what) + ": argument must be finite and >= 0, got " +
                          std::to_string(x));
    }
}

// sum_k (x^2/4)^k / (k!)^2, all terms positive
double i0_power_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < kSeriesRelTol * sum) break;
    }
    return sum;
}

// sqrt(2 pi x) e^{-x} I0(x) ~ sum_k ((2k-1)!!)^2 / (k! (8x)^k)
double i0_asymptotic_sum(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
        if (next >= term) break;  // asymptotic series has started to diverge
        term = next;
        sum += term;
        if (term < kSeriesRelTol * sum) break;
    }
    return sum;
}

// Q1(a, b) = sum_n Pois(n; a^2/2) * Gamma_upper_reg(n + 1, b^2/2), a > 0, b > 0.
// The summand is log-concave in n, so once it decreases the remainder is
// bounded by a geometric series with the current ratio.
double marcum_series(double a, double b) {
    const double lambda = 0.5 * a * a;
    const double x = 0.5 * b * b;
    const double log_lambda = std::log(lambda);
    const double log_x = std::log(x);

    double log_pois = -lambda;      // log Pois(n; lambda)
    double log_gterm = -x;          // log(e^{-x} x^n / n!)
    double log_upper = -x;          // log Gamma_upper_reg(n + 1, x)
    double log_term = log_pois + log_upper;
    double log_sum = log_term;

    for (long n = 1; n < kMarcumMaxTerms; ++n) {
        const double log_n = std::log(static_cast<double>(n));
        log_pois += log_lambda - log_n;
        log_gterm += log_x - log_n;
        log_upper = log_add_exp(log_upper, log_gterm);
        const double prev = log_term;
        log_term = log_pois + log_upper;
        log_sum = log_add_exp(log_sum, log_term);

        if (static_cast<double>(n) > lambda && log_term < prev) {
            const double ratio = std::exp(log_term - prev);
            const double log_remainder = log_term + std::log(ratio / (1.0 - ratio));
            if (log_remainder < log_sum + std::log(kSeriesRelTol)) break;
        }
    }
    return std::min(1.0, std::exp(log_sum));
}

// Integrating sqrt(x/a) phi(x - a) (1 + 1/(8ax)) from b to inf after expanding
// sqrt(1 + t/a) to second order in t/a, with c = b - a.
double marcum_large_argument(double a, double b) {
    const double c = b - a;
    const double phi = std_normal_pdf(c);
    const double value = std_normal_sf(c) + phi / (2.0 * a) - c * phi / (8.0 * a * a);
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace

void MarcumArgs::validate() const {
    require_nonneg_finite(a, "marcum_q1 (a)");
    require_nonneg_finite(b, "marcum_q1 (b)");
}

double bessel_i0(double x) {
    require_nonneg_finite(x, "bessel_i0");
    if (x <= kSeriesSwitch) return i0_power_series(x);
    return std::exp(x) * i0_asymptotic_sum(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_i0_scaled(double x) {
    require_nonneg_finite(x, "bessel_i0_scaled");
    if (x <= kSeriesSwitch) return std::exp(-x) * i0_power_series(x);
    return i0_asymptotic_sum(x) / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_j0(double x) {
    if (!std::isfinite(x)) throw DomainError("bessel_j0: argument must be finite");
    return std::cyl_bessel_j(0.0, std::abs(x));
}

double marcum_q1(MarcumArgs args) {
    args.validate();
    const double a = args.a;
    const double b = args.b;
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    if (a * b > kMarcumLargeArg) return marcum_large_argument(a, b);
    if (b >= a) return marcum_series(a, b);
    // reflection: the partner Q1(b, a) has its threshold above its noncentrality
    const double diag = std::exp(-0.5 * (a - b) * (a - b)) * bessel_i0_scaled(a * b);
    return std::clamp(1.0 + diag - marcum_series(b, a), 0.0, 1.0);
}

MarcumAsymptotic marcum_q1_asymptotic(MarcumArgs args) {
    args.validate();
    const double a = args.a;
    const double b = args.b;
    if (a == 0.0) throw DomainError("marcum_q1_asymptotic: a must be > 0");

    const double ratio = std::sqrt(b / a);
    const double gap = std::abs(b - a);
    const double tail = ratio * std_normal_sf(gap);
    const double lead = std::exp(-0.5 * gap * gap) / std::sqrt(2.0 * std::numbers::pi * a * b);
    if (b >= a) return {tail, lead};
    return {1.0 - tail, 1.0 - lead};
}

MarcumBounds marcum_q1_bounds(MarcumArgs args) {
    args.validate();
    const double a = args.a;
    const double b = args.b;
    const double near = std::exp(-0.5 * (b - a) * (b - a));
    const double far = std::exp(-0.5 * (b + a) * (b + a));
    if (a < b) return {far, near};
    if (b < a) return {1.0 - 0.5 * (near - far), 1.0};
    if (a == 0.0) return {1.0, 1.0};
    return {far, 1.0};
}

double std_normal_cdf(double t) {
    return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

double std_normal_sf(double t) {
    return 0.5 * std::erfc(t / std::numbers::sqrt2);
}

double std_normal_pdf(double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace onebit::specfun
