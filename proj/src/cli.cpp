#include "onebit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "onebit/ergodic.hpp"
#include "onebit/error.hpp"
#include "onebit/figures.hpp"
#include "onebit/mcsim.hpp"
#include "onebit/outage.hpp"
#include "onebit/table.hpp"

namespace onebit::cli {

namespace {

using report::Table;

constexpr double kBitsPerNat = 1.0 / std::numbers::ln2;

// Bad user input detected after parsing; maps to the usage exit code.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure part-way through a table; carries the rows done so far.
struct PartialResult : std::runtime_error {
    Table table;
    PartialResult(const std::string& what, Table t) : std::runtime_error(what), table(std::move(t)) {}
};

struct Sweep {
    std::string param;
    std::vector<double> values;
};

struct Params {
    std::int64_t k = 16;
    double snr_db = 10.0;
    std::optional<double> rho;
    std::optional<double> doppler_hz;
    std::optional<double> delay_s;
    std::string alpha;
    std::optional<double> rate_bits;
    std::optional<double> rate_nats;
    std::string power_mode = "short-term";
    std::int64_t n_blocks = 100000;
    std::uint64_t seed = 1;
    std::string sweep;
    std::string out;
    std::string format = "csv";
    std::string scheme;
    std::string quantity;
    std::string figure_id;
};

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw UsageError("invalid number '" + s + "' in " + what);
    }
}

Sweep parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw UsageError("--sweep expects <param>=<start>:<stop>:<points>[:log]");
    Sweep s{spec.substr(0, eq), {}};
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(eq + 1));
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log")) {
        throw UsageError("--sweep expects <param>=<start>:<stop>:<points>[:log], got '" + spec + "'");
    }
    const double a = to_double(parts[0], "--sweep");
    const double b = to_double(parts[1], "--sweep");
    const double n = to_double(parts[2], "--sweep");
    if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) throw UsageError("--sweep: points must be a positive integer");
    const bool log_scale = parts.size() == 4;
    if (log_scale && !(a > 0.0 && b > 0.0)) throw UsageError("--sweep: log spacing needs positive endpoints");
    const int points = static_cast<int>(n);
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        s.values.push_back(log_scale ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
    }
    return s;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct Resolved {
    std::int64_t k;
    double power;
    double snr_db;
    channel::CorrelationParams corr;
};

Resolved resolve(const Params& p) {
    if (p.k < 1) throw UsageError("--k must be >= 1");
    if (!std::isfinite(p.snr_db)) throw UsageError("--snr-db must be finite");
    channel::CorrelationParams corr{1.0};
    if (p.rho) {
        corr = {*p.rho};
    } else if (p.doppler_hz || p.delay_s) {
        if (!p.doppler_hz || !p.delay_s) throw UsageError("--doppler-hz and --delay-s must be given together");
        corr = channel::rho_from_jakes({*p.doppler_hz, *p.delay_s});
    }
    corr.validate();
    return {p.k, db_to_linear(p.snr_db), p.snr_db, corr};
}

std::optional<double> rate_nats(const Params& p) {
    if (p.rate_nats) return *p.rate_nats;
    if (p.rate_bits) return *p.rate_bits * std::numbers::ln2;
    return std::nullopt;
}

outage::PowerMode parse_power_mode(const std::string& s) {
    if (s == "short-term") return outage::PowerMode::short_term();
    if (s == "long-term") return outage::PowerMode::long_term();
    if (s.rfind("explicit:", 0) == 0) {
        const auto body = s.substr(9);
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw UsageError("--power-mode explicit:<P1>,<P0>");
        return outage::PowerMode::explicit_levels(to_double(body.substr(0, comma), "--power-mode"),
                                                 to_double(body.substr(comma + 1), "--power-mode"));
    }
    throw UsageError("--power-mode must be short-term, long-term or explicit:<P1>,<P0>");
}

// Numeric alpha, or the "suboptimal:<delta>" rule; nullopt for "optimal" / default.
std::optional<double> fixed_alpha(const std::string& spec, std::int64_t k) {
    if (spec.empty() || spec == "optimal") return std::nullopt;
    if (spec.rfind("suboptimal:", 0) == 0) {
        return ergodic::suboptimal_threshold(k, to_double(spec.substr(11), "--alpha"));
    }
    return to_double(spec, "--alpha");
}

void apply_sweep_value(Params& p, const std::string& param, double v) {
    if (param == "k") {
        p.k = std::llround(v);
    } else if (param == "snr-db") {
        p.snr_db = v;
    } else if (param == "rho") {
        p.rho = v;
    } else if (param == "alpha") {
        p.alpha = report::format_number(v);
    } else if (param == "rate-bits") {
        p.rate_bits = v;
        p.rate_nats.reset();
    } else if (param == "rate-nats") {
        p.rate_nats = v;
    } else if (param == "delay-s") {
        p.delay_s = v;
    } else if (param == "doppler-hz") {
        p.doppler_hz = v;
    } else {
        throw UsageError("--sweep: unsupported parameter '" + param + "'");
    }
}

using RowFn = std::function<std::vector<double>(const Params&)>;

// Shared by the tabular commands: one row per sweep point.
void fill_rows(Table& t, const Params& base, const RowFn& row) {
    std::vector<Params> points{base};
    if (!base.sweep.empty()) {
        const Sweep s = parse_sweep(base.sweep);
        points.clear();
        for (double v : s.values) {
            Params p = base;
            apply_sweep_value(p, s.param, v);
            points.push_back(p);
        }
    }
    for (const auto& p : points) {
        try {
            t.add_row(row(p));
        } catch (const UsageError&) {
            throw;
        } catch (const DomainError&) {
            throw;
        } catch (const std::exception& e) {
            t.partial = true;
            t.note = e.what();
            throw PartialResult(e.what(), std::move(t));
        }
    }
}

Table ergodic_table(const Params& base) {
    Table t("ergodic", {{"K", "users"},
                        {"snr", "dB"},
                        {"rho", "1"},
                        {"alpha", "power-gain"},
                        {"rate", "nats"},
                        {"rate", "bits"},
                        {"upper", "nats"},
                        {"lower", "nats"},
                        {"pr_transmit", "probability"}});
    fill_rows(t, base, [](const Params& p) {
        const auto r = resolve(p);
        const auto fixed = fixed_alpha(p.alpha, r.k);
        const double alpha = fixed ? *fixed : ergodic::optimal_threshold(r.k, r.power, r.corr);
        const auto rep = ergodic::evaluate({r.k, r.power, r.corr, alpha});
        return std::vector<double>{double(r.k),      r.snr_db,       r.corr.rho,     alpha,
                                   rep.rate_nats,    rep.rate_nats * kBitsPerNat,    rep.upper_nats,
                                   rep.lower_nats,   rep.prob_transmit};
    });
    return t;
}

Table wideband_table(const Params& base) {
    Table t("wideband", {{"K", "users"},
                         {"rho", "1"},
                         {"alpha", "power-gain"},
                         {"ebn0_min", "dB"},
                         {"ebn0_min", "linear"},
                         {"s0", "bits/3dB"}});
    fill_rows(t, base, [](const Params& p) {
        const auto r = resolve(p);
        const auto fixed = fixed_alpha(p.alpha, r.k);
        const double alpha = fixed ? *fixed : ergodic::wideband_threshold(r.k, r.corr);
        const auto wb = ergodic::wideband_metrics(alpha, r.k, r.corr);
        return std::vector<double>{double(r.k), r.corr.rho, alpha, wb.ebn0_min_db, wb.ebn0_min_linear, wb.slope_s0};
    });
    return t;
}

double outage_alpha(const Params& p, const Resolved& r, const outage::PowerMode& mode, double rate) {
    const auto fixed = fixed_alpha(p.alpha, r.k);
    return fixed ? *fixed : outage::threshold_for_mode(mode, r.power, rate);
}

Table outage_table(const Params& base) {
    Table t("outage", {{"K", "users"},
                       {"snr", "dB"},
                       {"rho", "1"},
                       {"rate", "nats"},
                       {"rate", "bits"},
                       {"alpha", "power-gain"},
                       {"eps", "probability"},
                       {"eps1", "probability"},
                       {"eps0", "probability"},
                       {"p1", "linear"},
                       {"p0", "linear"}});
    fill_rows(t, base, [](const Params& p) {
        const auto r = resolve(p);
        const auto rate = rate_nats(p);
        if (!rate) throw UsageError("outage needs --rate-bits or --rate-nats");
        const auto mode = parse_power_mode(p.power_mode);
        const double alpha = outage_alpha(p, r, mode, *rate);
        const auto rep = outage::outage_outdated({r.k, r.power, r.corr, *rate, alpha, mode});
        return std::vector<double>{double(r.k), r.snr_db, r.corr.rho, *rate, *rate * kBitsPerNat, alpha,
                                   rep.eps,     rep.eps1, rep.eps0,   rep.p1, rep.p0};
    });
    return t;
}

Table dmt_table(const Params& p) {
    if (p.k < 1) throw UsageError("--k must be >= 1");
    std::vector<outage::DmtScheme> schemes;
    if (p.scheme.empty() || p.scheme == "all") {
        schemes = outage::all_dmt_schemes();
    } else {
        try {
            schemes.push_back(outage::parse_dmt_scheme(p.scheme));
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    Table t("dmt", {{"r", "1"}});
    std::vector<outage::DmtCurve> curves;
    for (auto s : schemes) {
        curves.push_back(outage::dmt_analytic(s, p.k));
        t.columns.push_back({schemes.size() == 1 ? "d" : "d_" + std::string(outage::to_string(s)), "1", {}});
    }
    for (std::size_t i = 0; i < curves.front().points.size(); ++i) {
        std::vector<double> row{curves.front().points[i].r};
        for (const auto& c : curves) row.push_back(c.points[i].d);
        t.add_row(row);
    }
    return t;
}

Table simulate_table(const Params& base) {
    std::string quantity = base.quantity;
    if (quantity.empty()) quantity = rate_nats(base) ? "outage" : "ergodic";
    static const std::vector<std::string> known{"ergodic", "outage", "avg-power", "full-csi", "no-csi"};
    if (std::find(known.begin(), known.end(), quantity) == known.end()) {
        throw UsageError("--quantity must be one of ergodic, outage, avg-power, full-csi, no-csi");
    }
    const std::string unit = quantity == "outage" ? "probability" : quantity == "avg-power" ? "linear" : "nats";
    Table t("simulate", {{"K", "users"},
                         {"snr", "dB"},
                         {"rho", "1"},
                         {"alpha", "power-gain"},
                         {"estimate", unit},
                         {"std_error", unit},
                         {"n_blocks", "blocks"},
                         {"analytic", unit}});
    fill_rows(t, base, [&](const Params& p) {
        const auto r = resolve(p);
        if (p.n_blocks < 1) throw UsageError("--n-blocks must be >= 1");
        mcsim::SimConfig cfg;
        cfg.num_users = r.k;
        cfg.power = r.power;
        cfg.corr = r.corr;
        cfg.n_blocks = p.n_blocks;
        cfg.seed = p.seed;
        cfg.mode = parse_power_mode(p.power_mode);
        mcsim::McEstimate est;
        double analytic = 0.0;
        double alpha = 0.0;
        if (quantity == "ergodic") {
            const auto fixed = fixed_alpha(p.alpha, r.k);
            alpha = fixed ? *fixed : ergodic::optimal_threshold(r.k, r.power, r.corr);
            cfg.threshold = alpha;
            est = mcsim::simulate_ergodic_rate(cfg);
            analytic = ergodic::sum_rate({r.k, r.power, r.corr, alpha});
        } else if (quantity == "full-csi") {
            est = mcsim::reference_full_csi_rate(r.k, r.power, p.n_blocks, p.seed);
            analytic = ergodic::full_csi_rate(r.k, r.power);
        } else if (quantity == "no-csi") {
            est = mcsim::reference_no_csi_rate(r.power, p.n_blocks, p.seed);
            analytic = ergodic::unconditional_rate(r.power);
        } else {
            const auto rate = rate_nats(p);
            if (!rate) throw UsageError(quantity + " simulation needs --rate-bits or --rate-nats");
            cfg.rate_nats = *rate;
            alpha = outage_alpha(p, r, cfg.mode, *rate);
            cfg.threshold = alpha;
            const auto rep = outage::outage_outdated({r.k, r.power, r.corr, *rate, alpha, cfg.mode});
            if (quantity == "outage") {
                est = mcsim::simulate_outage(cfg);
                analytic = rep.eps;
            } else {
                est = mcsim::simulate_avg_power(cfg);
                analytic = outage::average_power({rep.p1, rep.p0}, alpha, r.k);
            }
        }
        return std::vector<double>{double(r.k), r.snr_db, r.corr.rho, alpha, est.mean, est.std_error,
                                   double(est.n), analytic};
    });
    return t;
}

std::string meta_line(const std::vector<std::string>& args) {
    std::string s = "onebit";
    for (const auto& a : args) s += ' ' + a;
    return s;
}

void emit(const Table& t, const Params& p, const std::string& meta, std::ostream& out) {
    const auto fmt = report::parse_format(p.format);
    if (p.out.empty()) {
        report::write_table(out, t, meta, fmt);
        return;
    }
    std::ofstream f(p.out, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + p.out + "' for writing");
    report::write_table(f, t, meta, fmt);
}

figures::FigureOverrides figure_overrides(const Params& p, const CLI::App& sub) {
    figures::FigureOverrides ov;
    if (sub.count("--k")) ov.k_values = std::vector<std::int64_t>{p.k};
    if (sub.count("--snr-db")) ov.snr_db = p.snr_db;
    if (p.rho) ov.rho_values = std::vector<double>{*p.rho};
    if (const auto rate = rate_nats(p)) ov.rate_nats = *rate;
    if (!p.sweep.empty()) {
        const Sweep s = parse_sweep(p.sweep);
        if (s.param == "k") {
            std::vector<std::int64_t> ks;
            for (double v : s.values) ks.push_back(std::llround(v));
            ov.k_values = ks;
        } else if (s.param == "rho") {
            ov.rho_values = s.values;
        } else if (s.param == "snr-db" || s.param == "ebn0-db") {
            ov.x_values = s.values;
        } else {
            throw UsageError("figure --sweep supports k, rho, snr-db and ebn0-db");
        }
    }
    return ov;
}

int run_figure(const Params& p, const CLI::App& sub, const std::string& meta, std::ostream& out,
               std::ostream& err) {
    const auto& ids = figures::figure_ids();
    if (std::find(ids.begin(), ids.end(), p.figure_id) == ids.end()) {
        throw UsageError("unknown figure '" + p.figure_id + "' (fig1..fig5)");
    }
    const auto fmt = report::parse_format(p.format);
    const std::filesystem::path dir = p.out.empty() ? std::filesystem::path(".") : std::filesystem::path(p.out);
    std::filesystem::create_directories(dir);

    std::vector<Table> tables;
    int status = kExitOk;
    try {
        figures::make_figure(p.figure_id, figure_overrides(p, sub), tables);
    } catch (const UsageError&) {
        throw;
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception& e) {
        err << "onebit: numerical failure: " << e.what() << '\n';
        status = kExitNumerical;
    }
    for (const auto& t : tables) {
        const auto path = dir / (t.name + report::extension(fmt));
        std::ofstream f(path, std::ios::binary);
        if (!f) throw UsageError("cannot open '" + path.string() + "' for writing");
        report::write_table(f, t, meta, fmt);
        out << path.string() << '\n';
    }
    return status;
}

enum Flags : unsigned {
    kK = 1u << 0,
    kSnr = 1u << 1,
    kCorr = 1u << 2,
    kAlpha = 1u << 3,
    kRate = 1u << 4,
    kPower = 1u << 5,
    kSim = 1u << 6,
    kSweep = 1u << 7,
};

void add_flags(CLI::App* sub, Params& p, unsigned flags) {
    if (flags & kK) sub->add_option("--k", p.k, "number of users K")->check(CLI::PositiveNumber);
    if (flags & kSnr) sub->add_option("--snr-db", p.snr_db, "SNR P in dB");
    if (flags & kCorr) {
        auto* rho = sub->add_option("--rho", p.rho, "temporal correlation coefficient");
        auto* fd = sub->add_option("--doppler-hz", p.doppler_hz, "Doppler frequency (Jakes model)");
        auto* tau = sub->add_option("--delay-s", p.delay_s, "feedback delay in seconds (Jakes model)");
        rho->excludes(fd)->excludes(tau);
    }
    if (flags & kAlpha) sub->add_option("--alpha", p.alpha, "threshold: <float> | optimal | suboptimal:<delta>");
    if (flags & kRate) {
        auto* bits = sub->add_option("--rate-bits", p.rate_bits, "rate in bits per channel use");
        auto* nats = sub->add_option("--rate-nats", p.rate_nats, "rate in nats per channel use");
        bits->excludes(nats);
    }
    if (flags & kPower) {
        sub->add_option("--power-mode", p.power_mode, "short-term | long-term | explicit:<P1>,<P0>");
    }
    if (flags & kSim) {
        sub->add_option("--n-blocks", p.n_blocks, "Monte-Carlo blocks");
        sub->add_option("--seed", p.seed, "64-bit seed");
    }
    if (flags & kSweep) sub->add_option("--sweep", p.sweep, "<param>=<start>:<stop>:<points>[:log]");
    sub->add_option("--out", p.out, "output file (directory for figure)");
    sub->add_option("--format", p.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Params p;
    CLI::App app{"1-bit feedback scheduling: ergodic rate, outage and DMT", "onebit"};
    app.require_subcommand(1);

    auto* erg = app.add_subcommand("ergodic", "ergodic sum-rate with outdated 1-bit feedback");
    add_flags(erg, p, kK | kSnr | kCorr | kAlpha | kSweep);
    auto* wide = app.add_subcommand("wideband", "minimum Eb/N0 and wideband slope");
    add_flags(wide, p, kK | kCorr | kAlpha | kSweep);
    auto* out_cmd = app.add_subcommand("outage", "outage probability at a fixed rate");
    add_flags(out_cmd, p, kK | kSnr | kCorr | kAlpha | kRate | kPower | kSweep);
    auto* dmt = app.add_subcommand("dmt", "diversity-multiplexing tradeoff curves");
    add_flags(dmt, p, kK);
    dmt->add_option("--scheme", p.scheme,
                    "longterm_1bit | shortterm_1bit | full_csi | outdated_1bit | no_csi | p2p_1bit | all");
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo simulation of the scheduler");
    add_flags(sim, p, kK | kSnr | kCorr | kAlpha | kRate | kPower | kSim | kSweep);
    sim->add_option("--quantity", p.quantity, "ergodic | outage | avg-power | full-csi | no-csi");
    auto* fig = app.add_subcommand("figure", "write the data series of a result figure");
    fig->add_option("id", p.figure_id, "fig1 | fig2 | fig3 | fig4 | fig5")->required();
    add_flags(fig, p, kK | kSnr | kCorr | kRate | kSweep);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::string meta = meta_line(args);
    Table table;
    try {
        if (fig->parsed()) return run_figure(p, *fig, meta, out, err);
        if (erg->parsed()) table = ergodic_table(p);
        if (wide->parsed()) table = wideband_table(p);
        if (out_cmd->parsed()) table = outage_table(p);
        if (dmt->parsed()) table = dmt_table(p);
        if (sim->parsed()) table = simulate_table(p);
        emit(table, p, meta, out);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "onebit: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "onebit: invalid parameter: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "onebit: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PartialResult& e) {
        err << "onebit: numerical failure: " << e.what() << '\n';
        try {
            emit(e.table, p, meta, out);
        } catch (const std::exception&) {
        }
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "onebit: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace onebit::cli
