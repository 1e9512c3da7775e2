#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/table.hpp"

// Data series behind the five result figures. Defaults:
//   fig1  rate vs K, P = 20 dB, K = 2, 4, ..., 1024
//   fig2  low-SNR rate vs Eb/N0 and its affine approximation, K = 100
//   fig3  instantaneous-feedback outage vs SNR, R = 3 bits, K in {1, 8, 16}, both power modes
//   fig4  outdated-feedback outage vs SNR, K = 16, R = 3 bits, long-term split
//   fig5  DMT curves, K = 16

namespace onebit::figures {

struct FigureOverrides {
    /// fig1: x axis. fig2/fig4/fig5: single K. fig3: user counts.
    std::optional<std::vector<std::int64_t>> k_values;
    /// fig1 SNR.
    std::optional<double> snr_db;
    /// Correlation values for the 1-bit curves of fig1, fig2 and fig4.
    std::optional<std::vector<double>> rho_values;
    /// x axis: Eb/N0 in dB (fig2), SNR in dB (fig3, fig4).
    std::optional<std::vector<double>> x_values;
    /// fig3, fig4.
    std::optional<double> rate_nats;
};

const std::vector<std::string>& figure_ids();

/// Appends one table per curve to `out`. On a numerical failure the table
/// being filled is appended with partial = true before the error propagates.
void make_figure(std::string_view id, const FigureOverrides& overrides,
                 std::vector<report::Table>& out);

/// Transmit SNR P solving Eb/N0 = P / C(P), C in bits, for an increasing
/// rate function. Returns nullopt when Eb/N0 is at or below the wideband
/// minimum of the curve.
std::optional<double> snr_for_ebn0(double ebn0_linear, const std::function<double(double)>& rate_bits);

}  // namespace onebit::figures
