#include "onebit/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "onebit/error.hpp"
#include "onebit/specfun.hpp"

namespace onebit::ergodic {

namespace {

constexpr double kGridStep = 0.05;
constexpr double kRefineWidth = 1e-4;
constexpr double kSearchMargin = 6.0;
// Q1 transition point beyond which splitting the integral no longer helps
constexpr double kMaxBreakpoint = 12.0;

void require_users(std::int64_t k) {
    if (k < 1) throw DomainError("number of users must be >= 1, got " + std::to_string(k));
}

void require_threshold(double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw DomainError("threshold alpha must be finite and >= 0, got " + std::to_string(alpha));
    }
}

void require_power(double p) {
    if (!std::isfinite(p) || !(p > 0.0)) {
        throw DomainError("power must be finite and > 0, got " + std::to_string(p));
    }
}

// Bound on e^{alpha} int_z^inf log(1 + P t^2) 2t e^{-t^2} dt, using
// 2Pt/(1+Pt^2) <= min(2Pt, 2/t) after integrating by parts.
specfun::TailBound rate_tail(double power, double alpha) {
    return [power, alpha](double z) {
        return std::exp(alpha - z * z) * (std::log1p(power * z * z) + std::min(power, 1.0 / (z * z)));
    };
}

double truncated_rate(double power, double alpha, const specfun::QuadratureSpec& q) {
    // v_tau = v: the selected user's power is alpha + Exp(1)
    auto f = [power, alpha](double z) {
        return std::log1p(z * z * power) * 2.0 * z * std::exp(alpha - z * z);
    };
    const double lo = std::sqrt(alpha);
    return specfun::integrate_semi_infinite(f, lo, q, rate_tail(power, alpha));
}

double delayed_rate(double power, double alpha, double r, const specfun::QuadratureSpec& q) {
    const double s = std::sqrt(1.0 - r * r);
    const double a_scale = std::numbers::sqrt2 * r / s;
    const double b = std::sqrt(2.0 * alpha) / s;
    auto f = [=](double z) {
        const double q1 = specfun::marcum_q1({a_scale * z, b});
        return std::log1p(z * z * power) * 2.0 * z * std::exp(alpha - z * z) * q1;
    };
    const auto tail = rate_tail(power, alpha);
    const double knee = std::sqrt(alpha) / r;
    if (alpha > 0.0 && knee < kMaxBreakpoint) {
        const double head = specfun::integrate_finite(f, 0.0, knee, q).value;
        return head + specfun::integrate_semi_infinite(f, knee, q, tail);
    }
    return specfun::integrate_semi_infinite(f, 0.0, q, tail);
}

template <typename MarcumFn>
double still_above(double alpha, channel::CorrelationParams c, MarcumFn q1) {
    c.validate();
    require_threshold(alpha);
    if (alpha == 0.0 || c.degenerate()) return 1.0;
    if (c.rho == 0.0) return std::exp(-alpha);
    const double r = c.magnitude();
    const double s = std::sqrt(2.0 * alpha / (1.0 - r * r));
    return std::clamp(1.0 + q1(r * s, s) - q1(s, r * s), 0.0, 1.0);
}

}  // namespace

void ErgodicConfig::validate() const {
    require_users(num_users);
    require_power(power);
    require_threshold(threshold);
    corr.validate();
}

double prob_none_above(double alpha, std::int64_t num_users) {
    require_threshold(alpha);
    require_users(num_users);
    if (alpha == 0.0) return 0.0;
    return std::exp(static_cast<double>(num_users) * std::log1p(-std::exp(-alpha)));
}

double prob_some_above(double alpha, std::int64_t num_users) {
    require_threshold(alpha);
    require_users(num_users);
    if (alpha == 0.0) return 1.0;
    return -std::expm1(static_cast<double>(num_users) * std::log1p(-std::exp(-alpha)));
}

double unconditional_rate(double power, const specfun::QuadratureSpec& q) {
    require_power(power);
    return truncated_rate(power, 0.0, q);
}

double full_csi_rate(std::int64_t num_users, double power, const specfun::QuadratureSpec& q) {
    require_users(num_users);
    require_power(power);
    const double k = static_cast<double>(num_users);
    // density of the largest of K unit exponentials
    auto f = [=](double x) {
        const double below = num_users == 1 ? 1.0 : std::exp((k - 1.0) * std::log1p(-std::exp(-x)));
        return std::log1p(power * x) * k * below * std::exp(-x);
    };
    auto tail = [=](double x) { return k * std::exp(-x) * (std::log1p(power * x) + std::min(power, 1.0 / x)); };
    const double mode = std::log(k);
    if (mode > 1.0) {
        return specfun::integrate_finite(f, 0.0, mode, q).value +
               specfun::integrate_semi_infinite(f, mode, q, tail);
    }
    return specfun::integrate_semi_infinite(f, 0.0, q, tail);
}

double sum_rate(const ErgodicConfig& cfg, const specfun::QuadratureSpec& q) {
    cfg.validate();
    const double transmit = prob_some_above(cfg.threshold, cfg.num_users);
    if (cfg.corr.rho == 0.0) return transmit * unconditional_rate(cfg.power, q);
    if (cfg.corr.degenerate()) return transmit * truncated_rate(cfg.power, cfg.threshold, q);
    if (cfg.threshold == 0.0) return transmit * unconditional_rate(cfg.power, q);
    return transmit * delayed_rate(cfg.power, cfg.threshold, cfg.corr.magnitude(), q);
}

double sum_rate_upper(const ErgodicConfig& cfg) {
    cfg.validate();
    const double r2 = cfg.corr.rho * cfg.corr.rho;
    return prob_some_above(cfg.threshold, cfg.num_users) *
           std::log1p(cfg.power * (1.0 + r2 * cfg.threshold));
}

double sum_rate_lower(const ErgodicConfig& cfg) {
    cfg.validate();
    return prob_some_above(cfg.threshold, cfg.num_users) * std::log1p(cfg.threshold * cfg.power) *
           prob_still_above(cfg.threshold, cfg.corr);
}

double prob_still_above(double alpha, channel::CorrelationParams c) {
    return still_above(alpha, c, [](double a, double b) { return specfun::marcum_q1({a, b}); });
}

double prob_still_above_asymptotic(double alpha, channel::CorrelationParams c) {
    return still_above(alpha, c, [](double a, double b) {
        return specfun::marcum_q1_asymptotic({a, b}).gaussian_tail;
    });
}

ErgodicReport evaluate(const ErgodicConfig& cfg, const specfun::QuadratureSpec& q) {
    return {sum_rate(cfg, q), sum_rate_upper(cfg), sum_rate_lower(cfg),
            prob_some_above(cfg.threshold, cfg.num_users)};
}

double optimal_threshold(std::int64_t num_users, double power, channel::CorrelationParams c,
                         const specfun::QuadratureSpec& q) {
    require_users(num_users);
    require_power(power);
    c.validate();
    auto rate = [&](double alpha) { return sum_rate({num_users, power, c, alpha}, q); };

    const double hi = std::log(static_cast<double>(num_users)) + kSearchMargin;
    const int steps = static_cast<int>(std::floor(hi / kGridStep));
    double best_alpha = 0.0;
    double best_rate = rate(0.0);
    for (int i = 1; i <= steps; ++i) {
        const double alpha = i * kGridStep;
        const double value = rate(alpha);
        if (value > best_rate) {
            best_rate = value;
            best_alpha = alpha;
        }
    }

    double lo = std::max(0.0, best_alpha - kGridStep);
    double up = std::min(hi, best_alpha + kGridStep);
    while (up - lo > kRefineWidth) {
        const double m1 = lo + (up - lo) / 3.0;
        const double m2 = up - (up - lo) / 3.0;
        if (rate(m1) >= rate(m2)) {
            up = m2;
        } else {
            lo = m1;
        }
    }
    const double refined = 0.5 * (lo + up);
    return rate(refined) > best_rate ? refined : best_alpha;
}

double suboptimal_threshold(std::int64_t num_users, double delta) {
    require_users(num_users);
    const double log_k = std::log(static_cast<double>(num_users));
    if (!(delta > 0.0) || !(delta < log_k)) {
        throw DomainError("suboptimal threshold needs 0 < delta < log K");
    }
    return log_k - delta;
}

double resolve_threshold(const ThresholdPolicy& policy, std::int64_t num_users, double power,
                         channel::CorrelationParams c, const specfun::QuadratureSpec& q) {
    switch (policy.kind) {
        case ThresholdPolicy::Kind::fixed:
            require_threshold(policy.value);
            return policy.value;
        case ThresholdPolicy::Kind::suboptimal:
            return suboptimal_threshold(num_users, policy.value);
        case ThresholdPolicy::Kind::optimal:
            return optimal_threshold(num_users, power, c, q);
    }
    throw DomainError("unknown threshold policy");
}

double degradation_estimate(channel::CorrelationParams c) {
    c.validate();
    if (c.rho == 0.0) throw DomainError("degradation_estimate: no finite prediction at rho = 0");
    return 2.0 * std::log(c.magnitude());
}

WidebandReport wideband_metrics(double alpha, std::int64_t num_users, channel::CorrelationParams c) {
    c.validate();
    const double transmit = prob_some_above(alpha, num_users);
    const double r2 = c.rho * c.rho;
    const double r4 = r2 * r2;
    const double gain = 1.0 + r2 * alpha;
    const double ebn0 = std::numbers::ln2 / (transmit * gain);
    const double slope =
        transmit * gain * gain / (1.0 + 2.0 * alpha * r2 - alpha * r4 + 0.5 * alpha * alpha * r4);
    return {10.0 * std::log10(ebn0), slope, ebn0};
}

WidebandReport full_csi_wideband(std::int64_t num_users) {
    require_users(num_users);
    // max of K unit exponentials: mean H_K, variance sum 1/k^2
    double mean = 0.0;
    double var = 0.0;
    for (std::int64_t k = num_users; k >= 1; --k) {
        const double inv = 1.0 / static_cast<double>(k);
        mean += inv;
        var += inv * inv;
    }
    const double ebn0 = std::numbers::ln2 / mean;
    return {10.0 * std::log10(ebn0), 2.0 * mean * mean / (var + mean * mean), ebn0};
}

double wideband_threshold(std::int64_t num_users, channel::CorrelationParams c) {
    require_users(num_users);
    c.validate();
    const double r2 = c.rho * c.rho;
    if (r2 == 0.0) return 0.0;
    auto gain = [&](double alpha) { return prob_some_above(alpha, num_users) * (1.0 + r2 * alpha); };
    // the product is unimodal: rising linear factor times a falling sigmoid
    double lo = 0.0;
    double hi = std::log(static_cast<double>(num_users)) + kSearchMargin;
    while (hi - lo > 1e-9) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (gain(m1) >= gain(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double alpha = 0.5 * (lo + hi);
    return gain(alpha) > gain(0.0) ? alpha : 0.0;
}

double affine_rate_bits(double ebn0_db, const WidebandReport& report) {
    constexpr double kThreeDb = 3.0102999566398120;  // 10 log10 2
    return std::max(0.0, report.slope_s0 / kThreeDb * (ebn0_db - report.ebn0_min_db));
}

MultiplexingGainBounds multiplexing_gain_bounds(double alpha, std::int64_t num_users,
                                                channel::CorrelationParams c) {
    const double upper = prob_some_above(alpha, num_users);
    return {upper * prob_still_above(alpha, c), upper};
}

double scaling_ratio(std::int64_t num_users, double power, channel::CorrelationParams c,
                     const specfun::QuadratureSpec& q) {
    if (num_users < 16) throw DomainError("scaling_ratio: needs K >= 16 so that log log K > 0.5");
    const double alpha = optimal_threshold(num_users, power, c, q);
    const double rate = sum_rate({num_users, power, c, alpha}, q);
    return rate / std::log(std::log(static_cast<double>(num_users)));
}

}  // namespace onebit::ergodic
