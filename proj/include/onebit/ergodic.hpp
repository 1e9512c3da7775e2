#pragma once

#include <cstdint>

#include "onebit/channel.hpp"
#include "onebit/quadrature.hpp"

// Ergodic sum-rate of threshold-based 1-bit feedback scheduling over K
// users with outdated feedback. The base station picks uniformly among the
// users whose estimated power exceeded the threshold and transmits at P, or
// stays silent when none did. All rates are in nats per channel use.

namespace onebit::ergodic {

struct ErgodicConfig {
    std::int64_t num_users = 1;
    /// Linear SNR.
    double power = 1.0;
    channel::CorrelationParams corr{};
    /// Feedback threshold on the channel power gain |h|^2.
    double threshold = 0.0;

    void validate() const;
};

struct ErgodicReport {
    double rate_nats = 0.0;
    double upper_nats = 0.0;
    double lower_nats = 0.0;
    double prob_transmit = 0.0;
};

/// How the feedback threshold is chosen.
struct ThresholdPolicy {
    enum class Kind { fixed, suboptimal, optimal };

    Kind kind = Kind::optimal;
    /// alpha for `fixed`, delta for `suboptimal`, unused for `optimal`.
    double value = 0.0;

    static ThresholdPolicy fixed(double alpha) { return {Kind::fixed, alpha}; }
    static ThresholdPolicy suboptimal(double delta) { return {Kind::suboptimal, delta}; }
    static ThresholdPolicy optimal() { return {Kind::optimal, 0.0}; }
};

struct WidebandReport {
    double ebn0_min_db = 0.0;
    double slope_s0 = 0.0;
    double ebn0_min_linear = 0.0;
};

struct MultiplexingGainBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Pr(N > 0) = 1 - (1 - e^{-alpha})^K.
double prob_some_above(double alpha, std::int64_t num_users);

/// Pr(N = 0) = (1 - e^{-alpha})^K.
double prob_none_above(double alpha, std::int64_t num_users);

/// E[log(1 + P |h|^2)] for unit-mean Rayleigh fading, i.e. no CSI at the transmitter.
double unconditional_rate(double power, const specfun::QuadratureSpec& q = {});

/// E[log(1 + P max_k |h_k|^2)], the full-CSI max-SNR scheduler.
double full_csi_rate(std::int64_t num_users, double power, const specfun::QuadratureSpec& q = {});

/// Closed-form ergodic sum-rate (single integral over the delayed envelope).
double sum_rate(const ErgodicConfig& cfg, const specfun::QuadratureSpec& q = {});

/// Jensen upper bound Pr(N>0) log(1 + P (1 + rho^2 alpha)).
double sum_rate_upper(const ErgodicConfig& cfg);

/// Lower bound Pr(N>0) log(1 + alpha P) Pr(v_tau^2 >= alpha | v^2 >= alpha).
double sum_rate_lower(const ErgodicConfig& cfg);

/// Pr(v_tau^2 >= alpha | v^2 >= alpha) = 1 + Q1(|rho| s, s) - Q1(s, |rho| s),
/// s = sqrt(2 alpha / (1 - rho^2)). Equals 1 at |rho| = 1.
double prob_still_above(double alpha, channel::CorrelationParams c);

/// Same quantity with both Marcum terms replaced by their Gaussian-tail
/// large-argument approximation.
double prob_still_above_asymptotic(double alpha, channel::CorrelationParams c);

ErgodicReport evaluate(const ErgodicConfig& cfg, const specfun::QuadratureSpec& q = {});

/// Maximiser of sum_rate over alpha in [0, log K + 6]: grid of step 0.05,
/// then ternary refinement to width 1e-4 around the left-most best point.
double optimal_threshold(std::int64_t num_users, double power, channel::CorrelationParams c,
                         const specfun::QuadratureSpec& q = {});

/// alpha = log K - delta, 0 < delta < log K.
double suboptimal_threshold(std::int64_t num_users, double delta);

double resolve_threshold(const ThresholdPolicy& policy, std::int64_t num_users, double power,
                         channel::CorrelationParams c, const specfun::QuadratureSpec& q = {});

/// Predicted large-K rate loss from feedback delay, 2 log|rho| (<= 0).
double degradation_estimate(channel::CorrelationParams c);

/// Minimum Eb/N0 and wideband slope at vanishing SNR.
WidebandReport wideband_metrics(double alpha, std::int64_t num_users, channel::CorrelationParams c);

/// Minimum Eb/N0 and wideband slope of the full-CSI max-SNR scheduler.
WidebandReport full_csi_wideband(std::int64_t num_users);

/// Threshold minimising Eb/N0_min, i.e. maximising Pr(N>0) (1 + rho^2 alpha).
double wideband_threshold(std::int64_t num_users, channel::CorrelationParams c);

/// Affine low-SNR spectral efficiency in bits/s/Hz:
/// S0 * (EbN0_dB - EbN0min_dB) / (10 log10 2), clamped at zero.
double affine_rate_bits(double ebn0_db, const WidebandReport& report);

/// High-SNR multiplexing gain bounds r_low <= r <= r_up.
MultiplexingGainBounds multiplexing_gain_bounds(double alpha, std::int64_t num_users,
                                                channel::CorrelationParams c);

/// R(alpha_o(K)) / log log K. Requires K >= 16.
double scaling_ratio(std::int64_t num_users, double power, channel::CorrelationParams c,
                     const specfun::QuadratureSpec& q = {});

}  // namespace onebit::ergodic
