#include "onebit/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "onebit/error.hpp"
#include "onebit/specfun.hpp"

namespace onebit::channel {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed;
    const std::uint64_t base = splitmix64(state);
    state = base ^ (index * 0xd1b54a32d192ed03ULL);
    std::uint32_t words[8];
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t r = splitmix64(state);
        words[2 * i] = static_cast<std::uint32_t>(r);
        words[2 * i + 1] = static_cast<std::uint32_t>(r >> 32);
    }
    std::seed_seq seq(std::begin(words), std::end(words));
    return std::mt19937_64(seq);
}

void require_density_args(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) {
        throw DomainError(std::string(what) + ": argument must be finite and >= 0");
    }
}

}  // namespace

void CorrelationParams::validate() const {
    if (!std::isfinite(rho) || std::abs(rho) > 1.0) {
        throw DomainError("CorrelationParams: rho must lie in [-1, 1], got " + std::to_string(rho));
    }
}

double CorrelationParams::magnitude() const { return std::abs(rho); }

bool CorrelationParams::degenerate() const {
    return std::abs(1.0 - std::abs(rho)) < kDegenerateTol;
}

void JakesParams::validate() const {
    if (!std::isfinite(doppler_hz) || doppler_hz < 0.0 || !std::isfinite(delay_s) || delay_s < 0.0) {
        throw DomainError("JakesParams: doppler_hz and delay_s must be finite and >= 0");
    }
}

CorrelationParams rho_from_jakes(JakesParams params) {
    params.validate();
    return {specfun::bessel_j0(2.0 * std::numbers::pi * params.doppler_hz * params.delay_s)};
}

double joint_pdf(double v, double v_tau, CorrelationParams c) {
    c.validate();
    require_density_args(v, "joint_pdf");
    require_density_args(v_tau, "joint_pdf");
    if (c.degenerate()) {
        throw DegenerateCorrelationError("joint_pdf: |rho| = 1 has no joint density");
    }
    const double r = c.magnitude();
    const double s2 = 1.0 - r * r;
    const double cross = 2.0 * r * v * v_tau / s2;
    // exp(-(v^2 + v_tau^2)/s2) I0(cross) with the Bessel exponent folded in
    const double expo = -(v * v + v_tau * v_tau - 2.0 * r * v * v_tau) / s2;
    return 4.0 * v * v_tau / s2 * std::exp(expo) * specfun::bessel_i0_scaled(cross);
}

double conditional_pdf_vtau(double z, double alpha, CorrelationParams c) {
    c.validate();
    require_density_args(z, "conditional_pdf_vtau");
    require_density_args(alpha, "conditional_pdf_vtau (alpha)");
    if (alpha == 0.0 || c.rho == 0.0) return 2.0 * z * std::exp(-z * z);
    if (c.degenerate()) {
        throw DegenerateCorrelationError(
            "conditional_pdf_vtau: |rho| = 1, use the truncated exponential law");
    }
    const double r = c.magnitude();
    const double s = std::sqrt(1.0 - r * r);
    const double q = specfun::marcum_q1({std::numbers::sqrt2 * r * z / s, std::sqrt(2.0 * alpha) / s});
    return 2.0 * z * std::exp(-z * z + alpha) * q;
}

double conditional_mean_power(double alpha, CorrelationParams c, const specfun::QuadratureSpec& q) {
    c.validate();
    require_density_args(alpha, "conditional_mean_power");
    if (c.degenerate()) return 1.0 + alpha;
    auto f = [&](double z) { return z * z * conditional_pdf_vtau(z, alpha, c); };
    // z^2 * 2z e^{-z^2 + alpha} bounds the integrand (Q1 <= 1)
    auto tail = [alpha](double z) { return std::exp(alpha - z * z) * (z * z + 1.0); };
    return specfun::integrate_semi_infinite(f, 0.0, q, tail);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : engine_(seeded_engine(seed, index)), half_var_normal_(0.0, std::sqrt(0.5)) {}

std::complex<double> RandomStream::complex_gaussian() {
    const double re = half_var_normal_(engine_);
    const double im = half_var_normal_(engine_);
    return {re, im};
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

double RandomStream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double RandomStream::exponential() { return std::exponential_distribution<double>(1.0)(engine_); }

std::complex<double> evolve_gain(std::complex<double> h, RandomStream& rng, CorrelationParams c) {
    c.validate();
    const double innovation = std::sqrt(std::max(0.0, 1.0 - c.rho * c.rho));
    const std::complex<double> w = rng.complex_gaussian();
    return c.rho * h + innovation * w;
}

FadingPair sample_pair(RandomStream& rng, CorrelationParams c) {
    const std::complex<double> h = rng.complex_gaussian();
    const std::complex<double> h_tau = evolve_gain(h, rng, c);
    return {std::abs(h), std::abs(h_tau)};
}

}  // namespace onebit::channel
