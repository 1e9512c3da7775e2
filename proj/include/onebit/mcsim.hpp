#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "onebit/channel.hpp"
#include "onebit/outage.hpp"

// Block-by-block simulation of the 1-bit feedback scheduler. Each block
// draws K independent fading pairs, collects the feedback bits v^2 >= alpha,
// picks a qualified user uniformly at random and transmits at the power the
// mode assigns. Blocks are independent.
//
// Blocks are split into fixed-size streams, each with its own generator
// derived from (seed, stream index); per-stream moments are merged in stream
// order, so results depend only on the config.

namespace onebit::mcsim {

/// Blocks per generator stream.
inline constexpr std::int64_t kStreamBlocks = 1 << 16;

struct SimConfig {
    std::int64_t num_users = 1;
    double power = 1.0;
    channel::CorrelationParams corr{};
    double threshold = 0.0;
    /// Outage mode only.
    double rate_nats = 1.0;
    outage::PowerMode mode{};
    std::int64_t n_blocks = 100000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct BlockRecord {
    std::int64_t n_above = 0;
    /// -1 when the base station stays silent.
    std::int64_t selected_user = -1;
    /// Position of the selected user among the qualified ones, -1 otherwise.
    std::int64_t selected_rank = -1;
    std::optional<channel::FadingPair> selected_pair;
    double tx_power = 0.0;
    double achieved_log = 0.0;
    bool outage = false;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

enum class SimMode {
    /// P1 = P on "1" blocks, silent otherwise.
    ergodic,
    /// Powers from cfg.mode; a random user is served on "0" blocks when P0 > 0.
    outage,
};

/// Simulate one block with the given power pair.
BlockRecord simulate_block(channel::RandomStream& rng, const SimConfig& cfg,
                           const outage::PowerLevels& levels, SimMode mode);

/// Visit every block of the run in order.
void for_each_block(const SimConfig& cfg, SimMode mode,
                    const std::function<void(const BlockRecord&)>& visit);

McEstimate simulate_ergodic_rate(const SimConfig& cfg);
McEstimate simulate_outage(const SimConfig& cfg);
McEstimate simulate_avg_power(const SimConfig& cfg);

/// E[log(1 + P max_k v_k^2)].
McEstimate reference_full_csi_rate(std::int64_t num_users, double power, std::int64_t n_blocks,
                                   std::uint64_t seed);

/// E[log(1 + P v^2)].
McEstimate reference_no_csi_rate(double power, std::int64_t n_blocks, std::uint64_t seed);

}  // namespace onebit::mcsim
