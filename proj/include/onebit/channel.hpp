#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "onebit/quadrature.hpp"

// Correlated block-Rayleigh fading: the envelope v = |h| at the estimation
// instant and v_tau = |h_tau| when the scheduled block is transmitted,
// with h_tau = rho h + sqrt(1 - rho^2) w.

namespace onebit::channel {

/// |1 - |rho|| below this is handled by the exact rho = 1 formulas.
inline constexpr double kDegenerateTol = 1e-9;

struct CorrelationParams {
    /// Temporal correlation coefficient in [-1, 1]. Densities use |rho|.
    double rho = 1.0;

    void validate() const;
    double magnitude() const;
    /// True when the instantaneous-feedback specialisation must be used.
    bool degenerate() const;
};

struct JakesParams {
    double doppler_hz = 0.0;
    double delay_s = 0.0;

    void validate() const;
};

struct FadingPair {
    double v = 0.0;
    double v_tau = 0.0;
};

/// rho = J0(2 pi f_D |tau|).
CorrelationParams rho_from_jakes(JakesParams params);

/// Joint density of (v, v_tau). Throws DegenerateCorrelationError when |rho| == 1.
double joint_pdf(double v, double v_tau, CorrelationParams c);

/// Density of v_tau given the feedback event v^2 >= alpha.
double conditional_pdf_vtau(double z, double alpha, CorrelationParams c);

/// E[v_tau^2 | v^2 >= alpha] by integrating z^2 against conditional_pdf_vtau.
double conditional_mean_power(double alpha, CorrelationParams c,
                              const specfun::QuadratureSpec& q = {});

/// A seedable 64-bit generator plus the CN(0,1) and uniform draws the
/// simulator needs. Not shareable across threads: one per worker.
class RandomStream {
public:
    /// Stream `index` of the family rooted at `seed`; distinct indices give
    /// statistically independent streams.
    explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0);

    /// Circularly-symmetric complex Gaussian with unit variance.
    std::complex<double> complex_gaussian();
    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);
    double uniform();
    /// Unit-mean exponential.
    double exponential();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> half_var_normal_;
};

/// h_tau = rho h + sqrt(1 - rho^2) w with a fresh w.
std::complex<double> evolve_gain(std::complex<double> h, RandomStream& rng, CorrelationParams c);

/// Draw (|h|, |h_tau|).
FadingPair sample_pair(RandomStream& rng, CorrelationParams c);

}  // namespace onebit::channel
