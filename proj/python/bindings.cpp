#include <sstream>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "onebit/cli.hpp"
#include "onebit/ergodic.hpp"
#include "onebit/error.hpp"
#include "onebit/mcsim.hpp"
#include "onebit/outage.hpp"
#include "onebit/specfun.hpp"

namespace py = pybind11;
using namespace onebit;

namespace {

outage::PowerMode power_mode(const std::string& name, double p1, double p0) {
    if (name == "short-term") return outage::PowerMode::short_term();
    if (name == "long-term") return outage::PowerMode::long_term();
    if (name == "explicit") return outage::PowerMode::explicit_levels(p1, p0);
    throw DomainError("power mode must be short-term, long-term or explicit");
}

mcsim::SimConfig sim_config(std::int64_t k, double power, double rho, double alpha, double rate,
                            const std::string& mode, std::int64_t n_blocks, std::uint64_t seed) {
    mcsim::SimConfig cfg;
    cfg.num_users = k;
    cfg.power = power;
    cfg.corr = {rho};
    cfg.threshold = alpha;
    cfg.rate_nats = rate;
    cfg.mode = power_mode(mode, 0.0, 0.0);
    cfg.n_blocks = n_blocks;
    cfg.seed = seed;
    return cfg;
}

py::dict estimate(const mcsim::McEstimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["std_error"] = e.std_error;
    d["n"] = e.n;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "1-bit feedback scheduling over fading broadcast channels";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    m.def("marcum_q1", [](double a, double b) { return specfun::marcum_q1({a, b}); }, py::arg("a"), py::arg("b"));
    m.def("bessel_i0", &specfun::bessel_i0, py::arg("x"));
    m.def("rho_from_jakes", [](double fd, double tau) { return channel::rho_from_jakes({fd, tau}).rho; },
          py::arg("doppler_hz"), py::arg("delay_s"));

    m.def("sum_rate", [](std::int64_t k, double p, double rho, double alpha) {
        return ergodic::sum_rate({k, p, {rho}, alpha});
    }, py::arg("k"), py::arg("power"), py::arg("rho"), py::arg("alpha"));
    m.def("rate_bounds", [](std::int64_t k, double p, double rho, double alpha) {
        const ergodic::ErgodicConfig cfg{k, p, {rho}, alpha};
        return py::make_tuple(ergodic::sum_rate_lower(cfg), ergodic::sum_rate_upper(cfg));
    }, py::arg("k"), py::arg("power"), py::arg("rho"), py::arg("alpha"));
    m.def("optimal_threshold", [](std::int64_t k, double p, double rho) {
        return ergodic::optimal_threshold(k, p, {rho});
    }, py::arg("k"), py::arg("power"), py::arg("rho"));
    m.def("full_csi_rate", [](std::int64_t k, double p) { return ergodic::full_csi_rate(k, p); },
          py::arg("k"), py::arg("power"));
    m.def("unconditional_rate", [](double p) { return ergodic::unconditional_rate(p); }, py::arg("power"));
    m.def("wideband_metrics", [](double alpha, std::int64_t k, double rho) {
        const auto w = ergodic::wideband_metrics(alpha, k, {rho});
        py::dict d;
        d["ebn0_min_db"] = w.ebn0_min_db;
        d["ebn0_min_linear"] = w.ebn0_min_linear;
        d["slope_s0"] = w.slope_s0;
        return d;
    }, py::arg("alpha"), py::arg("k"), py::arg("rho"));

    m.def("outage", [](std::int64_t k, double p, double rho, double rate, std::optional<double> alpha,
                       const std::string& mode, double p1, double p0) {
        const auto pm = power_mode(mode, p1, p0);
        const double a = alpha ? *alpha : outage::threshold_for_mode(pm, p, rate);
        const auto r = outage::outage_outdated({k, p, {rho}, rate, a, pm});
        py::dict d;
        d["alpha"] = a;
        d["eps"] = r.eps;
        d["eps1"] = r.eps1;
        d["eps0"] = r.eps0;
        d["p1"] = r.p1;
        d["p0"] = r.p0;
        return d;
    }, py::arg("k"), py::arg("power"), py::arg("rho"), py::arg("rate_nats"), py::arg("alpha") = py::none(),
       py::arg("mode") = "short-term", py::arg("p1") = 0.0, py::arg("p0") = 0.0);
    m.def("outage_longterm_closed", &outage::outage_longterm_closed, py::arg("power"), py::arg("k"),
          py::arg("rate_nats"));
    m.def("dmt_analytic", [](const std::string& scheme, std::int64_t k) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : outage::dmt_analytic(outage::parse_dmt_scheme(scheme), k).points) pts.emplace_back(p.r, p.d);
        return pts;
    }, py::arg("scheme"), py::arg("k"));

    m.def("simulate_ergodic_rate", [](std::int64_t k, double p, double rho, double alpha, std::int64_t n,
                                      std::uint64_t seed) {
        return estimate(mcsim::simulate_ergodic_rate(sim_config(k, p, rho, alpha, 1.0, "short-term", n, seed)));
    }, py::arg("k"), py::arg("power"), py::arg("rho"), py::arg("alpha"), py::arg("n_blocks"), py::arg("seed") = 1);
    m.def("simulate_outage", [](std::int64_t k, double p, double rho, double alpha, double rate,
                                const std::string& mode, std::int64_t n, std::uint64_t seed) {
        return estimate(mcsim::simulate_outage(sim_config(k, p, rho, alpha, rate, mode, n, seed)));
    }, py::arg("k"), py::arg("power"), py::arg("rho"), py::arg("alpha"), py::arg("rate_nats"),
       py::arg("mode") = "short-term", py::arg("n_blocks") = 100000, py::arg("seed") = 1);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
