#include "onebit/outage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onebit/ergodic.hpp"
#include "onebit/error.hpp"
#include "onebit/specfun.hpp"

namespace onebit::outage {

namespace {

constexpr double kUnderflowFloor = 1e-300;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void require_rate(double rate) {
    if (!std::isfinite(rate) || !(rate > 0.0)) {
        throw DomainError("rate must be finite and > 0, got " + std::to_string(rate));
    }
}

void require_nonneg(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError(std::string(what) + " must be finite and >= 0, got " + std::to_string(x));
    }
}

void require_positive(double x, const char* what) {
    if (!std::isfinite(x) || !(x > 0.0)) {
        throw DomainError(std::string(what) + " must be finite and > 0, got " + std::to_string(x));
    }
}

double q1(double a, double b) { return specfun::marcum_q1({a, b}); }

// Numerator of eps0 for outdated feedback, i.e. Pr(outage, v^2 < alpha).
double joint_outage_below(double rate, double p0, double alpha, channel::CorrelationParams c) {
    const auto t = OutdatedTerms::make(rate, alpha, c);
    const double r = c.magnitude();
    const double gap = std::expm1(rate) / p0;
    const double x = std::sqrt(t.mu / p0);
    const double y = std::sqrt(t.nu);
    return -std::expm1(-gap) - std::exp(-alpha) * q1(x, r * y) + std::exp(-gap) * q1(r * x, y);
}

}  // namespace

void OutageConfig::validate() const {
    if (num_users < 1) throw DomainError("number of users must be >= 1");
    require_positive(power, "power");
    corr.validate();
    require_rate(rate_nats);
    require_nonneg(threshold, "threshold");
    if (mode.kind == PowerMode::Kind::explicit_levels) {
        require_nonneg(mode.p1, "P1");
        require_nonneg(mode.p0, "P0");
    }
}

OutdatedTerms OutdatedTerms::make(double rate_nats, double alpha, channel::CorrelationParams c) {
    c.validate();
    if (c.degenerate()) throw DegenerateCorrelationError("OutdatedTerms: |rho| = 1");
    const double s2 = 1.0 - c.rho * c.rho;
    return {2.0 * std::expm1(rate_nats) / s2, 2.0 * alpha / s2};
}

PowerLevels resolve_power(const PowerMode& mode, double power, double alpha, std::int64_t num_users) {
    switch (mode.kind) {
        case PowerMode::Kind::short_term:
            return {power, power};
        case PowerMode::Kind::long_term_two_level:
            return power_split_longterm(power, alpha, num_users);
        case PowerMode::Kind::explicit_levels:
            return {mode.p1, mode.p0};
    }
    throw DomainError("unknown power mode");
}

double eps1_instant(double rate_nats, double p1, double alpha) {
    require_rate(rate_nats);
    require_nonneg(p1, "P1");
    require_nonneg(alpha, "threshold");
    if (p1 == 0.0) return 1.0;
    const double need = std::expm1(rate_nats);
    if (need <= p1 * alpha) return 0.0;
    return clamp01(-std::expm1(alpha - need / p1));
}

double eps0_instant(double rate_nats, double p0, double alpha) {
    require_rate(rate_nats);
    require_nonneg(p0, "P0");
    require_nonneg(alpha, "threshold");
    if (alpha == 0.0) throw DomainError("eps0_instant: alpha = 0 makes N = 0 a null event");
    if (p0 == 0.0) return 1.0;
    const double need = std::expm1(rate_nats);
    if (need > p0 * alpha) return 1.0;
    return clamp01(std::expm1(-need / p0) / std::expm1(-alpha));
}

OutageReport outage_instant(const OutageConfig& cfg) {
    cfg.validate();
    const auto levels = resolve_power(cfg.mode, cfg.power, cfg.threshold, cfg.num_users);
    const double some = ergodic::prob_some_above(cfg.threshold, cfg.num_users);
    const double none = ergodic::prob_none_above(cfg.threshold, cfg.num_users);
    const double e1 = eps1_instant(cfg.rate_nats, levels.p1, cfg.threshold);
    const double e0 = cfg.threshold == 0.0 ? 1.0 : eps0_instant(cfg.rate_nats, levels.p0, cfg.threshold);
    return {e1 * some + e0 * none, e1, e0, levels.p1, levels.p0};
}

double zero_outage_threshold(double power, double rate_nats) {
    require_positive(power, "power");
    require_rate(rate_nats);
    return 2.0 * std::expm1(rate_nats) / power;
}

double threshold_for_mode(const PowerMode& mode, double power, double rate_nats) {
    require_positive(power, "power");
    require_rate(rate_nats);
    switch (mode.kind) {
        case PowerMode::Kind::short_term:
            return std::expm1(rate_nats) / power;
        case PowerMode::Kind::long_term_two_level:
            return zero_outage_threshold(power, rate_nats);
        case PowerMode::Kind::explicit_levels:
            require_positive(mode.p1, "P1");
            return std::expm1(rate_nats) / mode.p1;
    }
    throw DomainError("unknown power mode");
}

PowerLevels power_split_longterm(double power, double alpha, std::int64_t num_users) {
    require_positive(power, "power");
    require_nonneg(alpha, "threshold");
    if (alpha == 0.0) throw DomainError("power_split_longterm: alpha = 0 leaves P0 unbounded");
    const double none = ergodic::prob_none_above(alpha, num_users);
    if (!(none > 0.0)) throw RangeError("power_split_longterm: Pr(N = 0) underflows, P0 unbounded");
    return {0.5 * power, 0.5 * power / none};
}

double average_power(const PowerLevels& levels, double alpha, std::int64_t num_users) {
    return ergodic::prob_some_above(alpha, num_users) * levels.p1 +
           ergodic::prob_none_above(alpha, num_users) * levels.p0;
}

double outage_longterm_closed(double power, std::int64_t num_users, double rate_nats) {
    require_positive(power, "power");
    require_rate(rate_nats);
    if (num_users < 1) throw DomainError("number of users must be >= 1");
    const double a = 2.0 * std::expm1(rate_nats) / power;
    const double q = -std::expm1(-a);
    const double k = static_cast<double>(num_users);
    return std::pow(q, k - 1.0) * -std::expm1(-a * std::pow(q, k));
}

double eps1_outdated(double rate_nats, double p1, double alpha, channel::CorrelationParams c) {
    c.validate();
    if (c.degenerate()) return eps1_instant(rate_nats, p1, alpha);
    require_rate(rate_nats);
    require_nonneg(p1, "P1");
    require_nonneg(alpha, "threshold");
    if (p1 == 0.0) return 1.0;
    const auto t = OutdatedTerms::make(rate_nats, alpha, c);
    const double r = c.magnitude();
    const double x = std::sqrt(t.mu / p1);
    const double y = std::sqrt(t.nu);
    return clamp01(q1(x, r * y) - std::exp(alpha - std::expm1(rate_nats) / p1) * q1(r * x, y));
}

double eps0_outdated(double rate_nats, double p0, double alpha, channel::CorrelationParams c) {
    c.validate();
    if (c.degenerate()) return eps0_instant(rate_nats, p0, alpha);
    require_rate(rate_nats);
    require_nonneg(p0, "P0");
    require_nonneg(alpha, "threshold");
    if (alpha == 0.0) throw DomainError("eps0_outdated: alpha = 0 makes N = 0 a null event");
    if (p0 == 0.0) return 1.0;
    return clamp01(joint_outage_below(rate_nats, p0, alpha, c) / -std::expm1(-alpha));
}

OutageReport outage_outdated(const OutageConfig& cfg) {
    cfg.validate();
    if (cfg.corr.degenerate()) return outage_instant(cfg);
    const auto levels = resolve_power(cfg.mode, cfg.power, cfg.threshold, cfg.num_users);
    const double some = ergodic::prob_some_above(cfg.threshold, cfg.num_users);
    const double none = ergodic::prob_none_above(cfg.threshold, cfg.num_users);
    const double e1 = eps1_outdated(cfg.rate_nats, levels.p1, cfg.threshold, cfg.corr);
    const double e0 =
        cfg.threshold == 0.0 ? 1.0 : eps0_outdated(cfg.rate_nats, levels.p0, cfg.threshold, cfg.corr);
    return {e1 * some + e0 * none, e1, e0, levels.p1, levels.p0};
}

std::string_view to_string(DmtScheme scheme) {
    switch (scheme) {
        case DmtScheme::longterm_1bit: return "longterm_1bit";
        case DmtScheme::shortterm_1bit: return "shortterm_1bit";
        case DmtScheme::full_csi: return "full_csi";
        case DmtScheme::outdated_1bit: return "outdated_1bit";
        case DmtScheme::no_csi: return "no_csi";
        case DmtScheme::p2p_1bit: return "p2p_1bit";
    }
    return "unknown";
}

DmtScheme parse_dmt_scheme(std::string_view name) {
    for (const auto scheme : all_dmt_schemes()) {
        if (to_string(scheme) == name) return scheme;
    }
    // short aliases accepted on the command line
    if (name == "longterm" || name == "long-term") return DmtScheme::longterm_1bit;
    if (name == "shortterm" || name == "short-term") return DmtScheme::shortterm_1bit;
    if (name == "full" || name == "full-csi") return DmtScheme::full_csi;
    if (name == "outdated") return DmtScheme::outdated_1bit;
    if (name == "none" || name == "no-csi") return DmtScheme::no_csi;
    if (name == "p2p") return DmtScheme::p2p_1bit;
    throw DomainError("unknown DMT scheme '" + std::string(name) + "'");
}

const std::vector<DmtScheme>& all_dmt_schemes() {
    static const std::vector<DmtScheme> schemes{
        DmtScheme::longterm_1bit, DmtScheme::shortterm_1bit, DmtScheme::full_csi,
        DmtScheme::outdated_1bit, DmtScheme::no_csi,        DmtScheme::p2p_1bit};
    return schemes;
}

DmtCurve dmt_analytic(DmtScheme scheme, std::int64_t num_users) {
    if (num_users < 1) throw DomainError("number of users must be >= 1");
    const double k = static_cast<double>(num_users);
    double max_diversity = 1.0;
    switch (scheme) {
        case DmtScheme::longterm_1bit: max_diversity = 2.0 * k; break;
        case DmtScheme::shortterm_1bit: max_diversity = k; break;
        case DmtScheme::full_csi: max_diversity = k; break;
        case DmtScheme::outdated_1bit: max_diversity = 1.0; break;
        case DmtScheme::no_csi: max_diversity = 1.0; break;
        case DmtScheme::p2p_1bit: max_diversity = 2.0; break;
    }
    DmtCurve curve{scheme, {}};
    for (int i = 0; i <= 10; ++i) {
        const double r = i / 10.0;
        curve.points.push_back({r, max_diversity * std::max(0.0, 1.0 - r)});
    }
    return curve;
}

double dmt_empirical_slope(const OutageFn& eps_fn, double r, double p_lo, double p_hi,
                           double base_rate_nats) {
    if (!(p_lo > 1.0) || !(p_hi > p_lo) || !std::isfinite(p_hi)) {
        throw DomainError("dmt_empirical_slope: need 1 < P_lo < P_hi");
    }
    require_nonneg(r, "multiplexing gain");
    require_nonneg(base_rate_nats, "base rate");
    const double e_lo = eps_fn(p_lo, base_rate_nats + r * std::log(p_lo));
    const double e_hi = eps_fn(p_hi, base_rate_nats + r * std::log(p_hi));
    if (!(e_lo >= kUnderflowFloor) || !(e_hi >= kUnderflowFloor)) {
        throw RangeError("dmt_empirical_slope: outage underflows below 1e-300; lower P_hi");
    }
    return -(std::log(e_hi) - std::log(e_lo)) / (std::log(p_hi) - std::log(p_lo));
}

}  // namespace onebit::outage
