#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/channel.hpp"

// Outage probability of 1-bit threshold feedback scheduling at a fixed
// rate R (nats). When at least one user reports "1" the selected user gets
// P1; otherwise a random user gets P0.

namespace onebit::outage {

struct PowerMode {
    enum class Kind { short_term, long_term_two_level, explicit_levels };

    Kind kind = Kind::short_term;
    double p1 = 0.0;  // explicit_levels only
    double p0 = 0.0;  // explicit_levels only

    static PowerMode short_term() { return {Kind::short_term, 0.0, 0.0}; }
    static PowerMode long_term() { return {Kind::long_term_two_level, 0.0, 0.0}; }
    static PowerMode explicit_levels(double p1, double p0) { return {Kind::explicit_levels, p1, p0}; }
};

struct PowerLevels {
    double p1 = 0.0;
    double p0 = 0.0;
};

struct OutageConfig {
    std::int64_t num_users = 1;
    /// Power budget: per block for short_term, long-term average otherwise.
    double power = 1.0;
    channel::CorrelationParams corr{};
    double rate_nats = 1.0;
    double threshold = 0.0;
    PowerMode mode{};

    void validate() const;
};

struct OutageReport {
    double eps = 0.0;
    /// Outage given N > 0.
    double eps1 = 0.0;
    /// Outage given N = 0. Reported as 1 when alpha = 0 (null event).
    double eps0 = 0.0;
    double p1 = 0.0;
    double p0 = 0.0;
};

/// mu = 2(e^R - 1)/(1 - rho^2), nu = 2 alpha/(1 - rho^2).
struct OutdatedTerms {
    double mu = 0.0;
    double nu = 0.0;

    static OutdatedTerms make(double rate_nats, double alpha, channel::CorrelationParams c);
};

/// (P1, P0) for a mode; long-term uses the two-level split below.
PowerLevels resolve_power(const PowerMode& mode, double power, double alpha, std::int64_t num_users);

/// Outage given N > 0 with instantaneous feedback.
double eps1_instant(double rate_nats, double p1, double alpha);

/// Outage given N = 0 with instantaneous feedback. Requires alpha > 0.
double eps0_instant(double rate_nats, double p0, double alpha);

/// Outage with rho treated as 1.
OutageReport outage_instant(const OutageConfig& cfg);

/// alpha = 2(e^R - 1)/P: with P1 = P/2 there is no outage when N > 0.
double zero_outage_threshold(double power, double rate_nats);

/// Threshold that removes outage on "1" blocks for the given mode:
/// (e^R - 1)/P1 with P1 = P (short-term) or P/2 (long-term).
double threshold_for_mode(const PowerMode& mode, double power, double rate_nats);

/// P1 = P/2, P0 = P / (2 Pr(N = 0)).
PowerLevels power_split_longterm(double power, double alpha, std::int64_t num_users);

/// Long-term average transmit power Pr(N>0) P1 + Pr(N=0) P0.
double average_power(const PowerLevels& levels, double alpha, std::int64_t num_users);

/// Closed-form outage of the two-level scheme at the zero-outage threshold.
double outage_longterm_closed(double power, std::int64_t num_users, double rate_nats);

/// Outage given N > 0 with outdated feedback.
double eps1_outdated(double rate_nats, double p1, double alpha, channel::CorrelationParams c);

/// Outage given N = 0 with outdated feedback.
double eps0_outdated(double rate_nats, double p0, double alpha, channel::CorrelationParams c);

/// Outage with outdated feedback; identical to outage_instant at |rho| = 1.
OutageReport outage_outdated(const OutageConfig& cfg);

enum class DmtScheme { longterm_1bit, shortterm_1bit, full_csi, outdated_1bit, no_csi, p2p_1bit };

struct DmtPoint {
    double r = 0.0;
    double d = 0.0;
};

struct DmtCurve {
    DmtScheme scheme{};
    std::vector<DmtPoint> points;
};

std::string_view to_string(DmtScheme scheme);
DmtScheme parse_dmt_scheme(std::string_view name);
const std::vector<DmtScheme>& all_dmt_schemes();

/// Piecewise-linear achievable tradeoff sampled at r = 0, 0.1, ..., 1.
DmtCurve dmt_analytic(DmtScheme scheme, std::int64_t num_users);

/// Outage as a function of (P, R).
using OutageFn = std::function<double(double power, double rate_nats)>;

/// Finite-SNR secant -[log eps(P_hi) - log eps(P_lo)] / [log P_hi - log P_lo]
/// with R = base_rate + r log P. base_rate keeps R > 0 at r = 0.
double dmt_empirical_slope(const OutageFn& eps_fn, double r, double p_lo, double p_hi,
                           double base_rate_nats = 0.6931471805599453);

}  // namespace onebit::outage
