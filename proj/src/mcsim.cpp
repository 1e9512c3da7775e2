#include "onebit/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "onebit/error.hpp"

namespace onebit::mcsim {

namespace {

// Welford accumulator with Chan's pairwise merge.
struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double delta = o.mean - mean;
        const double total = na + nb;
        mean += delta * nb / total;
        m2 += o.m2 + delta * delta * na * nb / total;
        n += o.n;
    }
};

McEstimate sample_estimate(const Moments& m) {
    const double n = static_cast<double>(m.n);
    const double var = m.n > 1 ? m.m2 / (n - 1.0) : 0.0;
    return {m.mean, std::sqrt(var / n), m.n};
}

McEstimate binomial_estimate(const Moments& m) {
    const double n = static_cast<double>(m.n);
    const double p = m.mean;
    return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / n), m.n};
}

void require_blocks(std::int64_t n) {
    if (n < 1) throw DomainError("n_blocks must be >= 1, got " + std::to_string(n));
}

// Runs `body(rng, count)` on each stream and merges the returned moments.
template <typename Body>
Moments run_streams(std::int64_t n_blocks, std::uint64_t seed, Body body) {
    Moments total;
    const std::int64_t streams = (n_blocks + kStreamBlocks - 1) / kStreamBlocks;
    for (std::int64_t s = 0; s < streams; ++s) {
        const std::int64_t count = std::min(kStreamBlocks, n_blocks - s * kStreamBlocks);
        channel::RandomStream rng(seed, static_cast<std::uint64_t>(s));
        total.merge(body(rng, count));
    }
    return total;
}

outage::PowerLevels levels_for(const SimConfig& cfg, SimMode mode) {
    if (mode == SimMode::ergodic) return {cfg.power, 0.0};
    return outage::resolve_power(cfg.mode, cfg.power, cfg.threshold, cfg.num_users);
}

template <typename Value>
McEstimate simulate(const SimConfig& cfg, SimMode mode, Value value, bool binomial) {
    cfg.validate();
    const auto levels = levels_for(cfg, mode);
    const Moments m = run_streams(cfg.n_blocks, cfg.seed, [&](channel::RandomStream& rng, std::int64_t count) {
        Moments local;
        for (std::int64_t i = 0; i < count; ++i) local.add(value(simulate_block(rng, cfg, levels, mode)));
        return local;
    });
    return binomial ? binomial_estimate(m) : sample_estimate(m);
}

}  // namespace

void SimConfig::validate() const {
    if (num_users < 1) throw DomainError("number of users must be >= 1");
    if (!std::isfinite(power) || !(power > 0.0)) throw DomainError("power must be finite and > 0");
    corr.validate();
    if (!std::isfinite(threshold) || threshold < 0.0) throw DomainError("threshold must be >= 0");
    if (!std::isfinite(rate_nats) || !(rate_nats > 0.0)) throw DomainError("rate must be > 0");
    require_blocks(n_blocks);
}

BlockRecord simulate_block(channel::RandomStream& rng, const SimConfig& cfg,
                           const outage::PowerLevels& levels, SimMode mode) {
    thread_local std::vector<std::complex<double>> gains;
    gains.resize(static_cast<std::size_t>(cfg.num_users));

    BlockRecord rec;
    for (auto& h : gains) {
        h = rng.complex_gaussian();
        if (std::norm(h) >= cfg.threshold) ++rec.n_above;
    }

    if (rec.n_above > 0) {
        // the m-th qualified user, m uniform in [0, N)
        auto m = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(rec.n_above)));
        rec.selected_rank = m;
        for (std::int64_t k = 0; k < cfg.num_users; ++k) {
            if (std::norm(gains[k]) >= cfg.threshold && m-- == 0) {
                rec.selected_user = k;
                break;
            }
        }
        rec.tx_power = levels.p1;
    } else if (mode == SimMode::outage && levels.p0 > 0.0) {
        rec.selected_user =
            static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(cfg.num_users)));
        rec.tx_power = levels.p0;
    }

    if (rec.selected_user >= 0) {
        const auto h = gains[static_cast<std::size_t>(rec.selected_user)];
        // only the scheduled user's channel needs to be carried forward
        const auto h_tau = channel::evolve_gain(h, rng, cfg.corr);
        rec.selected_pair = channel::FadingPair{std::abs(h), std::abs(h_tau)};
        rec.achieved_log = std::log1p(std::norm(h_tau) * rec.tx_power);
    }
    rec.outage = rec.achieved_log < cfg.rate_nats;
    return rec;
}

void for_each_block(const SimConfig& cfg, SimMode mode,
                    const std::function<void(const BlockRecord&)>& visit) {
    cfg.validate();
    const auto levels = levels_for(cfg, mode);
    run_streams(cfg.n_blocks, cfg.seed, [&](channel::RandomStream& rng, std::int64_t count) {
        for (std::int64_t i = 0; i < count; ++i) visit(simulate_block(rng, cfg, levels, mode));
        return Moments{};
    });
}

McEstimate simulate_ergodic_rate(const SimConfig& cfg) {
    return simulate(cfg, SimMode::ergodic, [](const BlockRecord& r) { return r.achieved_log; }, false);
}

McEstimate simulate_outage(const SimConfig& cfg) {
    return simulate(cfg, SimMode::outage, [](const BlockRecord& r) { return r.outage ? 1.0 : 0.0; }, true);
}

McEstimate simulate_avg_power(const SimConfig& cfg) {
    return simulate(cfg, SimMode::outage, [](const BlockRecord& r) { return r.tx_power; }, false);
}

McEstimate reference_full_csi_rate(std::int64_t num_users, double power, std::int64_t n_blocks,
                                   std::uint64_t seed) {
    if (num_users < 1) throw DomainError("number of users must be >= 1");
    if (!std::isfinite(power) || !(power > 0.0)) throw DomainError("power must be finite and > 0");
    require_blocks(n_blocks);
    const Moments m = run_streams(n_blocks, seed, [&](channel::RandomStream& rng, std::int64_t count) {
        Moments local;
        for (std::int64_t i = 0; i < count; ++i) {
            double best = 0.0;
            for (std::int64_t k = 0; k < num_users; ++k) best = std::max(best, rng.exponential());
            local.add(std::log1p(power * best));
        }
        return local;
    });
    return sample_estimate(m);
}

McEstimate reference_no_csi_rate(double power, std::int64_t n_blocks, std::uint64_t seed) {
    return reference_full_csi_rate(1, power, n_blocks, seed);
}

}  // namespace onebit::mcsim
