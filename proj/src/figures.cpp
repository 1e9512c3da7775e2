#include "onebit/figures.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "onebit/ergodic.hpp"
#include "onebit/error.hpp"
#include "onebit/outage.hpp"

namespace onebit::figures {

namespace {

using report::Table;

constexpr double kBitsPerNat = 1.0 / std::numbers::ln2;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

std::string rho_label(double rho) { return "rho_" + report::format_number(rho); }

// Fills `t` row by row through `fill`; a failure flags the table and still hands it to `out`.
template <typename Fill>
void build(std::vector<Table>& out, Table t, Fill fill) {
    try {
        fill(t);
    } catch (const std::exception& e) {
        t.partial = true;
        t.note = e.what();
        out.push_back(std::move(t));
        throw;
    }
    out.push_back(std::move(t));
}

void fig1(const FigureOverrides& ov, std::vector<Table>& out) {
    std::vector<std::int64_t> ks = ov.k_values.value_or(std::vector<std::int64_t>{});
    if (ks.empty()) {
        for (std::int64_t k = 2; k <= 1024; k *= 2) ks.push_back(k);
    }
    const double power = db_to_linear(ov.snr_db.value_or(20.0));
    const auto rhos = ov.rho_values.value_or(std::vector<double>{1.0, 0.9, 0.5, 0.0});

    build(out, Table("fig1_full_csi", {{"K", "users"}, {"rate", "nats"}, {"rate", "bits"}}), [&](Table& t) {
        for (auto k : ks) {
            const double r = ergodic::full_csi_rate(k, power);
            t.add_row({double(k), r, r * kBitsPerNat});
        }
    });
    for (double rho : rhos) {
        const channel::CorrelationParams c{rho};
        build(out,
              Table("fig1_" + rho_label(rho),
                    {{"K", "users"}, {"alpha", "power-gain"}, {"rate", "nats"}, {"rate", "bits"}}),
              [&](Table& t) {
                  for (auto k : ks) {
                      const double alpha = ergodic::optimal_threshold(k, power, c);
                      const double r = ergodic::sum_rate({k, power, c, alpha});
                      t.add_row({double(k), alpha, r, r * kBitsPerNat});
                  }
              });
    }
    build(out, Table("fig1_no_csi", {{"K", "users"}, {"rate", "nats"}, {"rate", "bits"}}), [&](Table& t) {
        const double r = ergodic::unconditional_rate(power);
        for (auto k : ks) t.add_row({double(k), r, r * kBitsPerNat});
    });
}

void fig2(const FigureOverrides& ov, std::vector<Table>& out) {
    const std::int64_t k = ov.k_values && !ov.k_values->empty() ? ov.k_values->front() : 100;
    const auto grid = ov.x_values.value_or(linspace(-9.0, 6.0, 31));
    const auto rhos = ov.rho_values.value_or(std::vector<double>{1.0, 0.9, 0.5, 0.0});
    // low-SNR rates are O(P); the default absolute tolerance would dominate
    specfun::QuadratureSpec q;
    q.abs_tol = 1e-18;
    q.tail_cutoff_tol = 1e-20;

    auto curve = [&](const std::string& name, const ergodic::WidebandReport& wb, double alpha,
                     const std::function<double(double)>& rate_nats) {
        build(out,
              Table(name, {{"ebn0", "dB"},
                           {"snr", "linear"},
                           {"alpha", "power-gain"},
                           {"rate", "bits"},
                           {"rate", "nats"},
                           {"affine", "bits"}}),
              [&](Table& t) {
                  for (double x : grid) {
                      const auto power = snr_for_ebn0(
                          db_to_linear(x), [&](double p) { return rate_nats(p) * kBitsPerNat; });
                      if (!power) continue;
                      const double r = rate_nats(*power);
                      t.add_row({x, *power, alpha, r * kBitsPerNat, r, ergodic::affine_rate_bits(x, wb)});
                  }
              });
    };

    curve("fig2_full_csi", ergodic::full_csi_wideband(k), 0.0,
          [&](double p) { return ergodic::full_csi_rate(k, p, q); });
    for (double rho : rhos) {
        const channel::CorrelationParams c{rho};
        const double alpha = ergodic::wideband_threshold(k, c);
        curve("fig2_" + rho_label(rho), ergodic::wideband_metrics(alpha, k, c), alpha,
              [&](double p) { return ergodic::sum_rate({k, p, c, alpha}, q); });
    }
}

std::vector<double> snr_grid(const FigureOverrides& ov) {
    return ov.x_values.value_or(linspace(0.0, 40.0, 41));
}

void fig3(const FigureOverrides& ov, std::vector<Table>& out) {
    const auto ks = ov.k_values.value_or(std::vector<std::int64_t>{1, 8, 16});
    const double rate = ov.rate_nats.value_or(3.0 * std::numbers::ln2);
    const auto grid = snr_grid(ov);
    const std::pair<const char*, outage::PowerMode> modes[] = {
        {"longterm", outage::PowerMode::long_term()}, {"shortterm", outage::PowerMode::short_term()}};
    for (const auto& [label, mode] : modes) {
        for (auto k : ks) {
            build(out,
                  Table(std::string("fig3_") + label + "_K_" + std::to_string(k),
                        {{"snr", "dB"}, {"alpha", "power-gain"}, {"eps", "probability"}}),
                  [&](Table& t) {
                      for (double x : grid) {
                          const double p = db_to_linear(x);
                          const double alpha = outage::threshold_for_mode(mode, p, rate);
                          const auto rep = outage::outage_instant({k, p, {1.0}, rate, alpha, mode});
                          t.add_row({x, alpha, rep.eps});
                      }
                  });
        }
    }
}

void fig4(const FigureOverrides& ov, std::vector<Table>& out) {
    const std::int64_t k = ov.k_values && !ov.k_values->empty() ? ov.k_values->front() : 16;
    const double rate = ov.rate_nats.value_or(3.0 * std::numbers::ln2);
    const auto rhos = ov.rho_values.value_or(std::vector<double>{1.0, 0.99, 0.9, 0.5, 0.0});
    const auto grid = snr_grid(ov);
    const auto mode = outage::PowerMode::long_term();
    for (double rho : rhos) {
        build(out,
              Table("fig4_" + rho_label(rho), {{"snr", "dB"}, {"alpha", "power-gain"}, {"eps", "probability"}}),
              [&](Table& t) {
                  for (double x : grid) {
                      const double p = db_to_linear(x);
                      const double alpha = outage::zero_outage_threshold(p, rate);
                      const auto rep = outage::outage_outdated({k, p, {rho}, rate, alpha, mode});
                      t.add_row({x, alpha, rep.eps});
                  }
              });
    }
}

void fig5(const FigureOverrides& ov, std::vector<Table>& out) {
    const std::int64_t k = ov.k_values && !ov.k_values->empty() ? ov.k_values->front() : 16;
    for (auto scheme : outage::all_dmt_schemes()) {
        build(out, Table("fig5_" + std::string(outage::to_string(scheme)), {{"r", "1"}, {"d", "1"}}),
              [&](Table& t) {
                  for (const auto& pt : outage::dmt_analytic(scheme, k).points) t.add_row({pt.r, pt.d});
              });
    }
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig1", "fig2", "fig3", "fig4", "fig5"};
    return ids;
}

void make_figure(std::string_view id, const FigureOverrides& overrides, std::vector<report::Table>& out) {
    if (id == "fig1") return fig1(overrides, out);
    if (id == "fig2") return fig2(overrides, out);
    if (id == "fig3") return fig3(overrides, out);
    if (id == "fig4") return fig4(overrides, out);
    if (id == "fig5") return fig5(overrides, out);
    throw DomainError("unknown figure '" + std::string(id) + "' (fig1..fig5)");
}

std::optional<double> snr_for_ebn0(double ebn0_linear, const std::function<double(double)>& rate_bits) {
    if (!(ebn0_linear > 0.0) || !std::isfinite(ebn0_linear)) {
        throw DomainError("Eb/N0 must be finite and > 0");
    }
    const double target = std::log(ebn0_linear);
    // in log P: log Eb/N0(P) - log target, increasing in P
    auto excess = [&](double u) { return u - std::log(rate_bits(std::exp(u))) - target; };

    constexpr double kLowest = -16.0;  // P = 1e-7, deep in the linear regime
    constexpr double kHighest = 25.0;
    const double f_lo = excess(kLowest);
    if (f_lo >= 0.0) return std::nullopt;
    double hi = 0.0;
    double f_hi = excess(hi);
    while (f_hi <= 0.0) {
        hi += 2.0;
        if (hi > kHighest) throw RangeError("snr_for_ebn0: Eb/N0 beyond the supported SNR range");
        f_hi = excess(hi);
    }
    double lo = hi > 0.0 ? hi - 2.0 : kLowest;
    double f_lo2 = hi > 0.0 ? excess(lo) : f_lo;
    if (f_lo2 > 0.0) {
        lo = kLowest;
        f_lo2 = f_lo;
    }

    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        excess, lo, hi, f_lo2, f_hi, boost::math::tools::eps_tolerance<double>(40), iters);
    if (iters >= 200) throw ConvergenceError("snr_for_ebn0: root finder did not converge", std::exp(a), b - a);
    return std::exp(0.5 * (a + b));
}

}  // namespace onebit::figures
