// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "../oracles.hpp"
#include "onebit/ergodic.hpp"
#include "onebit/figures.hpp"
#include "onebit/mcsim.hpp"
#include "onebit/outage.hpp"
#include "onebit/specfun.hpp"

using namespace onebit;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [fail: " << what << "]";
        }
    }
};

struct Criterion {
    std::string title;
    double budget_s;
    std::function<void(Outcome&)> run;
};

double db(double x) { return std::pow(10.0, x / 10.0); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

mcsim::SimConfig sim(std::int64_t k, double p, double rho, double alpha, std::int64_t n, std::uint64_t seed) {
    mcsim::SimConfig c;
    c.num_users = k;
    c.power = p;
    c.corr = {rho};
    c.threshold = alpha;
    c.n_blocks = n;
    c.seed = seed;
    return c;
}

bool within_se(const mcsim::McEstimate& e, double truth, double sigmas = 3.0) {
    return std::abs(e.mean - truth) <= sigmas * e.std_error + 1e-12;
}

const std::vector<std::int64_t> kErgodicK{1, 4, 16};
const std::vector<double> kErgodicRho{0.0, 0.5, 0.9, 1.0};
const std::vector<double> kErgodicSnrDb{10.0, 20.0};

void marcum_fidelity(Outcome& o) {
    const auto grid = log_grid(1e-3, 50.0, 30);
    double worst = 0.0;
    int outside = 0;
    for (double a : grid) {
        for (double b : grid) {
            const double q = specfun::marcum_q1({a, b});
            worst = std::max(worst, std::abs(q - oracle::marcum_q1_quadrature(a, b)));
            const auto bounds = specfun::marcum_q1_bounds({a, b});
            if (q < bounds.lower - 1e-15 || q > bounds.upper + 1e-15) ++outside;
        }
    }
    o.detail << "max |err| = " << worst << " over 900 points, " << outside << " outside bounds";
    o.check(worst <= 1e-9, "quadrature agreement");
    o.check(outside == 0, "bounds");
}

void ergodic_vs_sim(Outcome& o) {
    int cells = 0, bad = 0;
    double worst = 0.0;
    std::uint64_t seed = 1000;
    for (auto k : kErgodicK) {
        for (double rho : kErgodicRho) {
            for (double snr : kErgodicSnrDb) {
                const double p = db(snr);
                const double alpha = ergodic::optimal_threshold(k, p, {rho});
                const double exact = ergodic::sum_rate({k, p, {rho}, alpha});
                const auto e = mcsim::simulate_ergodic_rate(sim(k, p, rho, alpha, 1'000'000, ++seed));
                worst = std::max(worst, std::abs(e.mean - exact) / e.std_error);
                ++cells;
                if (!within_se(e, exact)) {
                    ++bad;
                    o.detail << " K=" << k << ",rho=" << rho << ",snr=" << snr;
                }
            }
        }
    }
    o.detail << " " << cells << " cells, worst deviation " << worst << " SE";
    o.check(bad == 0, std::to_string(bad) + " cells beyond 3 SE");
}

void bound_sandwich(Outcome& o) {
    int points = 0, bad = 0;
    double min_margin = 1e300;
    for (auto k : kErgodicK) {
        for (double rho : kErgodicRho) {
            for (double snr : kErgodicSnrDb) {
                const double p = db(snr);
                std::vector<double> alphas{ergodic::optimal_threshold(k, p, {rho}), 0.5, 1.0, 2.0, 4.0};
                for (double alpha : alphas) {
                    const auto r = ergodic::evaluate({k, p, {rho}, alpha});
                    min_margin = std::min({min_margin, r.rate_nats - r.lower_nats, r.upper_nats - r.rate_nats});
                    ++points;
                    if (r.lower_nats > r.rate_nats + 1e-6 || r.rate_nats > r.upper_nats + 1e-6) ++bad;
                }
            }
        }
    }
    o.detail << points << " points, smallest margin " << min_margin << " nats";
    o.check(bad == 0, std::to_string(bad) + " violations");
}

void degradation(Outcome& o) {
    const std::int64_t k = 1'000'000;
    const double p = 100.0;
    const double full = ergodic::sum_rate({k, p, {1.0}, ergodic::optimal_threshold(k, p, {1.0})});
    for (double rho : {0.9, 0.7, 0.5}) {
        const double rate = ergodic::sum_rate({k, p, {rho}, ergodic::optimal_threshold(k, p, {rho})});
        const double gap = full - rate;
        const double predicted = -2.0 * std::log(rho);
        const double rel = std::abs(gap - predicted) / predicted;
        o.detail << "rho=" << rho << " gap " << gap << " vs " << predicted << " (" << 100.0 * rel << "%) ";
        o.check(rel <= 0.15, "rho=" + std::to_string(rho));
    }
}

void wideband_pins(Outcome& o) {
    for (std::int64_t k : {1, 100}) {
        const auto w = ergodic::wideband_metrics(0.0, k, {0.0});
        char shown[32];
        std::snprintf(shown, sizeof shown, "%.2f", w.ebn0_min_db);
        o.check(std::abs(w.ebn0_min_linear - std::log(2.0)) <= 1e-12, "log 2 at K=" + std::to_string(k));
        o.check(std::string(shown) == "-1.59", "dB display at K=" + std::to_string(k));
        if (k == 100) o.detail << "rho=0: " << shown << " dB; ";
    }

    const std::int64_t k = 1'000'000;
    const double rho = 0.9;
    const double alpha = std::log(static_cast<double>(k)) - 2.0;
    const auto w = ergodic::wideband_metrics(alpha, k, {rho});
    const double predicted = std::log(2.0) / (rho * rho * std::log(static_cast<double>(k)));
    const double e_rel = std::abs(w.ebn0_min_linear / predicted - 1.0);
    const double s_rel = std::abs(w.slope_s0 / 2.0 - 1.0);
    o.detail << "K=1e6: EbN0min off " << 100.0 * e_rel << "%, S0 = " << w.slope_s0 << "; ";
    o.check(e_rel <= 0.10, "large-K Eb/N0_min");
    o.check(s_rel <= 0.05, "large-K S0");

    specfun::QuadratureSpec q;
    q.abs_tol = 1e-18;
    q.rel_tol = 1e-12;
    q.tail_cutoff_tol = 1e-20;
    double worst1 = 0.0, worst2 = 0.0;
    for (double r : {0.0, 0.5, 0.9, 1.0}) {
        const std::int64_t users = 10;
        const double a = 2.0;
        const auto m = ergodic::wideband_metrics(a, users, {r});
        const double h1 = 1e-6;
        const double slope = ergodic::sum_rate({users, h1, {r}, a}, q) / h1;
        worst1 = std::max(worst1, std::abs(std::log(2.0) / slope / m.ebn0_min_linear - 1.0));
        const double h = 1e-4;
        const double r1 = ergodic::sum_rate({users, h, {r}, a}, q);
        const double r2 = ergodic::sum_rate({users, 2.0 * h, {r}, a}, q);
        const double d1 = (4.0 * r1 - r2) / (2.0 * h);
        const double d2 = (r2 - 2.0 * r1) / (h * h);
        worst2 = std::max(worst2, std::abs(2.0 * d1 * d1 / -d2 / m.slope_s0 - 1.0));
    }
    o.detail << "finite differences rel " << worst1 << " / " << worst2;
    o.check(worst1 <= 1e-3, "Eb/N0_min finite difference");
    o.check(worst2 <= 1e-2, "S0 finite difference");
}

void outage_vs_sim(Outcome& o) {
    const double rate = 3.0 * std::log(2.0);
    const std::vector<std::pair<const char*, outage::PowerMode>> modes{{"short", outage::PowerMode::short_term()},
                                                                       {"long", outage::PowerMode::long_term()}};
    int cells = 0, skipped = 0, bad = 0;
    double worst = 0.0;
    std::uint64_t seed = 6000;
    auto run_cell = [&](std::int64_t k, double rho, double snr, const char* label, outage::PowerMode mode,
                        bool outdated) {
        const double p = db(snr);
        const double alpha = outage::threshold_for_mode(mode, p, rate);
        const outage::OutageConfig cfg{k, p, {rho}, rate, alpha, mode};
        const double eps = outdated ? outage::outage_outdated(cfg).eps : outage::outage_instant(cfg).eps;
        ++seed;
        if (eps < 1e-4) {
            ++skipped;
            return;
        }
        auto s = sim(k, p, rho, alpha, 1'000'000, seed);
        s.rate_nats = rate;
        s.mode = mode;
        const auto e = mcsim::simulate_outage(s);
        ++cells;
        worst = std::max(worst, std::abs(e.mean - eps) / std::max(e.std_error, 1e-300));
        if (!within_se(e, eps)) {
            ++bad;
            o.detail << " " << (outdated ? "outdated" : "instant") << " K=" << k << ",rho=" << rho << ",snr=" << snr
                     << "," << label;
        }
    };
    for (std::int64_t k : {1, 8, 16}) {
        for (double snr : {5.0, 10.0, 15.0}) {
            for (const auto& [label, mode] : modes) {
                run_cell(k, 1.0, snr, label, mode, false);
                for (double rho : {0.5, 0.9}) run_cell(k, rho, snr, label, mode, true);
            }
        }
    }
    o.detail << " " << cells << " cells simulated, " << skipped << " below 1e-4, worst " << worst << " SE";
    o.check(bad == 0, std::to_string(bad) + " cells beyond 3 SE");
}

void longterm_pipeline(Outcome& o) {
    double worst = 0.0;
    int points = 0;
    for (double p : {1.0, 10.0, 100.0, 1e3, 1e4}) {
        for (std::int64_t k : {1, 2, 4, 8, 16}) {
            for (double r : {0.5, 1.0, 2.0, 4.0}) {
                const double alpha = outage::zero_outage_threshold(p, r);
                const auto lv = outage::power_split_longterm(p, alpha, k);
                const auto rep = outage::outage_instant(
                    {k, p, {1.0}, r, alpha, outage::PowerMode::explicit_levels(lv.p1, lv.p0)});
                worst = std::max(worst, std::abs(rep.eps - outage::outage_longterm_closed(p, k, r)));
                ++points;
            }
        }
    }
    const double golden = outage::outage_longterm_closed(100.0, 1, 2.0);
    auto s = sim(1, 100.0, 1.0, outage::zero_outage_threshold(100.0, 2.0), 1'000'000, 7001);
    s.rate_nats = 2.0;
    s.mode = outage::PowerMode::long_term();
    const auto e = mcsim::simulate_outage(s);
    o.detail << points << " points, max |diff| " << worst << "; golden " << golden << ", MC " << e.mean << " +/- "
             << e.std_error;
    o.check(points == 100 && worst <= 1e-12, "pipeline identity");
    o.check(std::abs(golden - 0.01521) <= 5e-6, "golden value");
    o.check(within_se(e, golden), "Monte-Carlo");
}

void power_feasibility(Outcome& o) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> users(1, 8);
    std::uniform_real_distribution<double> snr(0.0, 30.0);
    std::uniform_real_distribution<double> thr(0.5, 3.0);
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::int64_t k = users(rng);
        const double p = db(snr(rng));
        const double alpha = thr(rng);
        auto s = sim(k, p, 0.9, alpha, 1'000'000, 8000 + i);
        s.rate_nats = 1.0;
        s.mode = outage::PowerMode::long_term();
        const auto e = mcsim::simulate_avg_power(s);
        const double expected = outage::average_power(outage::power_split_longterm(p, alpha, k), alpha, k);
        worst = std::max(worst, std::abs(e.mean - expected) / std::max(e.std_error, 1e-300));
        const bool ok = expected <= p * (1.0 + 1e-12) && e.mean <= p + 3.0 * e.std_error && within_se(e, expected);
        if (!ok) {
            ++bad;
            o.detail << " K=" << k << ",P=" << p << ",alpha=" << alpha;
        }
    }
    o.detail << " 20 configs, worst deviation " << worst << " SE";
    o.check(bad == 0, std::to_string(bad) + " configs");
}

void dmt_slopes(Outcome& o) {
    for (std::int64_t k : {1, 2, 4}) {
        const outage::OutageFn fn = [k](double p, double r) { return outage::outage_longterm_closed(p, k, r); };
        const double d = outage::dmt_empirical_slope(fn, 0.0, 1e6, 1e8);
        o.detail << "K=" << k << ": " << d << " ";
        o.check(std::abs(d / (2.0 * k) - 1.0) <= 0.05, "long-term K=" + std::to_string(k));
    }
    const outage::OutageFn od = [](double p, double r) {
        return outage::outage_outdated(
                   {16, p, {0.9}, r, outage::zero_outage_threshold(p, r), outage::PowerMode::long_term()})
            .eps;
    };
    const double d = outage::dmt_empirical_slope(od, 0.0, 1e6, 1e8);
    o.detail << "outdated: " << d;
    o.check(std::abs(d - 1.0) <= 0.10, "outdated");
}

void limit_reductions(Outcome& o) {
    const std::int64_t k = 8;
    const double p = 10.0;
    double sup = 0.0;
    for (auto mode : {outage::PowerMode::short_term(), outage::PowerMode::long_term()}) {
        for (int i = 1; i <= 10; ++i) {
            const double r = 0.4 * i;
            const double alpha = outage::threshold_for_mode(mode, p, r);
            const double inst = outage::outage_instant({k, p, {1.0}, r, alpha, mode}).eps;
            const double near = outage::outage_outdated({k, p, {1.0 - 1e-6}, r, alpha, mode}).eps;
            sup = std::max(sup, std::abs(inst - near));
        }
    }
    o.detail << "rho->1 sup-norm " << sup << "; ";
    o.check(sup <= 1e-3, "rho -> 1");

    double collapse = 0.0;
    for (double r : {0.5, 1.5, 3.0}) {
        for (double alpha : {0.3, 1.0, 2.5}) {
            const auto lv = outage::power_split_longterm(p, alpha, k);
            const auto rep = outage::outage_outdated(
                {k, p, {0.0}, r, alpha, outage::PowerMode::explicit_levels(lv.p1, lv.p0)});
            const double c = std::expm1(r);
            const double q0 = ergodic::prob_none_above(alpha, k);
            const double expected = (1.0 - q0) * -std::expm1(-c / lv.p1) + q0 * -std::expm1(-c / lv.p0);
            collapse = std::max(collapse, std::abs(rep.eps - expected));
        }
        const double alpha = 1.0;
        const double rate = ergodic::sum_rate({k, p, {0.0}, alpha});
        collapse = std::max(collapse, std::abs(rate - ergodic::prob_some_above(alpha, k) *
                                                          ergodic::unconditional_rate(p)));
    }
    o.detail << "rho=0 collapse max |diff| " << collapse << "; ";
    o.check(collapse <= 1e-14, "rho = 0 collapse");

    const double kk = 1e8;
    const double rho = 0.5;
    const double alpha = std::log(kk) - 2.0;
    const double x = std::sqrt(2.0 * alpha / (1.0 - rho * rho));
    const double bracket = 1.0 + specfun::marcum_q1_asymptotic({rho * x, x}).gaussian_tail -
                           specfun::marcum_q1_asymptotic({x, rho * x}).gaussian_tail;
    const double exact = 1.0 + specfun::marcum_q1({rho * x, x}) - specfun::marcum_q1({x, rho * x});
    o.detail << "large-K bracket " << bracket << " (series " << exact << ")";
    o.check(std::abs(bracket - 1.0) <= 0.05, "large-K bracket");
}

const report::Table& find(const std::vector<report::Table>& tables, const std::string& name) {
    for (const auto& t : tables) {
        if (t.name == name) return t;
    }
    throw std::runtime_error("missing table " + name);
}

void figures_ordering(Outcome& o) {
    std::vector<report::Table> f1, f4, f5;
    figures::make_figure("fig1", {}, f1);
    figures::make_figure("fig4", {}, f4);
    figures::make_figure("fig5", {}, f5);

    const auto& full = find(f1, "fig1_full_csi").column("rate", "nats").values;
    const auto& none = find(f1, "fig1_no_csi").column("rate", "nats").values;
    int bad1 = 0;
    for (const auto& t : f1) {
        if (t.name == "fig1_full_csi" || t.name == "fig1_no_csi") continue;
        const auto& v = t.column("rate", "nats").values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < none[i] - 1e-9 || v[i] > full[i] + 1e-9) ++bad1;
        }
    }

    int bad4 = 0;
    for (std::size_t j = 1; j < f4.size(); ++j) {
        const auto& better = f4[j - 1].column("eps", "probability").values;
        const auto& worse = f4[j].column("eps", "probability").values;
        for (std::size_t i = 0; i < better.size(); ++i) {
            if (better[i] > worse[i] * (1.0 + 1e-12)) ++bad4;
        }
    }

    auto intercept = [&](const std::string& name) { return find(f5, name).column("d", "1").values.front(); };
    const double lt = intercept("fig5_longterm_1bit");
    const double st = intercept("fig5_shortterm_1bit");
    const double od = intercept("fig5_outdated_1bit");

    o.detail << "fig1 ordering violations " << bad1 << ", fig4 " << bad4 << ", fig5 intercepts " << lt << "/" << st
             << "/" << od;
    o.check(bad1 == 0, "fig1 ordering");
    o.check(bad4 == 0, "fig4 ordering");
    o.check(lt == 32.0 && st == 16.0 && od == 1.0, "fig5 intercepts");
}

const std::map<int, Criterion>& criteria() {
    static const std::map<int, Criterion> all{
        {1, {"Marcum Q1 fidelity", 10.0, marcum_fidelity}},
        {2, {"ergodic closed form vs simulator", 300.0, ergodic_vs_sim}},
        {3, {"rate bound sandwich", 300.0, bound_sandwich}},
        {4, {"delay degradation vs 2 log|rho|", 60.0, degradation}},
        {5, {"wideband pins", 300.0, wideband_pins}},
        {6, {"outage closed forms vs simulator", 600.0, outage_vs_sim}},
        {7, {"long-term pipeline identity", 300.0, longterm_pipeline}},
        {8, {"long-term power feasibility", 300.0, power_feasibility}},
        {9, {"DMT secant slopes", 60.0, dmt_slopes}},
        {10, {"limit reductions", 300.0, limit_reductions}},
        {11, {"figure orderings", 600.0, figures_ordering}},
    };
    return all;
}

bool run_one(int id, const Criterion& c) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        c.run(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(secs <= c.budget_s, "runtime budget");
    char head[64];
    std::snprintf(head, sizeof head, "%s c%02d ", o.pass ? "PASS" : "FAIL", id);
    std::cout << head << c.title << " (" << std::fixed << std::setprecision(1) << secs << " s): "
              << std::defaultfloat << std::setprecision(6) << o.detail.str() << std::endl;
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> selected;
    app.add_option("-c,--criterion", selected, "criterion numbers to run (default: all)")
        ->check(CLI::Range(1, static_cast<int>(criteria().size())));
    CLI11_PARSE(app, argc, argv);

    if (selected.empty()) {
        for (const auto& [id, c] : criteria()) selected.push_back(id);
    }
    bool ok = true;
    for (int id : selected) ok = run_one(id, criteria().at(id)) && ok;
    return ok ? 0 : 1;
}
