// Command-line runner: one subcommand per pipeline, configured by INI files.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wqload/charfit.hpp"
#include "wqload/config.hpp"
#include "wqload/efficiency.hpp"
#include "wqload/error.hpp"
#include "wqload/fock.hpp"
#include "wqload/io.hpp"

namespace {

using namespace wqload;

constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct Options
{
    std::string config;
    std::string out;
    std::string data;
    std::string kind = "spectrum";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

// Writes to --out when given, else stdout. Reports go to stdout, or stderr
// when stdout carries the CSV.
class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw Error("config", "config-error", "cannot write " + path);
        }
    }
    std::ostream& data() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    std::ostream& report() { return file_.is_open() ? std::cout : std::cerr; }

private:
    std::ofstream file_;
};

ExperimentConfig load(const Options& o)
{
    if (o.config.empty())
        throw Error("config", "config-error", "--config is required");
    ExperimentConfig cfg = load_config(o.config);
    if (o.seed) {
        if (!cfg.noise)
            cfg.noise = NoiseSection{};
        cfg.noise->seed = *o.seed;
    }
    return cfg;
}

void require(bool present, const char* section)
{
    if (!present)
        throw Error("config", "config-error", std::string("missing section [") + section + "]");
}

CsvStamp stamp(const ExperimentConfig& cfg)
{
    return {config_hash(cfg), cfg.noise ? cfg.noise->seed : 0};
}

int run_simulate(const Options& o)
{
    const ExperimentConfig cfg = load(o);
    require(cfg.qubit.has_value(), "qubit");
    require(cfg.pulse.has_value(), "pulse");
    const Scenario s = to_scenario(cfg);
    const PipelineResult r = run_pipeline(s);
    Output out(o.out);
    write_trace_csv(out.data(), r.field, stamp(cfg));
    if (!o.quiet) {
        auto& rep = out.report();
        rep << std::setprecision(6);
        if (r.eta) {
            rep << "eta = " << r.eta->eta << '\n'
                << "eta_flux = " << r.eta_flux->eta << '\n'
                << "t_i_us = " << r.eta->windows.t_i * 1e6 << '\n'
                << "t0_us = " << r.eta->windows.t0 * 1e6 << '\n'
                << "t_f_us = " << r.eta->windows.t_f * 1e6 << '\n';
        } else {
            rep << "eta = undefined (" << to_string(s.pulse.shape) << " pulse)\n";
        }
    }
    return 0;
}

int run_fock(const Options& o)
{
    const ExperimentConfig cfg = load(o);
    require(cfg.qubit.has_value(), "qubit");
    const QubitParams p = to_qubit(*cfg.qubit);
    const double tau = cfg.pulse ? cfg.pulse->tau_ns * 1e-9 : fock_tau_opt(p);
    std::optional<double> dt;
    if (cfg.simulation && cfg.simulation->dt_ns)
        dt = *cfg.simulation->dt_ns * 1e-9;
    const TimeGrid grid = fock_grid(tau, p, dt);
    const FockTrajectory traj = evolve_fock(xi_exp_rising(tau, grid), grid, p);
    Output out(o.out);
    write_fock_csv(out.data(), traj, p, stamp(cfg));
    if (!o.quiet) {
        const FockEfficiency num = fock_efficiency_numeric(tau, p, dt);
        auto& rep = out.report();
        rep << std::setprecision(6) << "tau_ns = " << tau * 1e9 << '\n'
            << "eta_numeric = " << num.eta << '\n'
            << "eta_closed_form = " << fock_efficiency(tau, p) << '\n'
            << "total_out = " << num.total_out << '\n';
    }
    return 0;
}

std::vector<SweepPoint> analytic_points(const std::string& model, const std::vector<double>& taus_s,
                                        const std::vector<double>& values, const QubitParams& p)
{
    std::vector<SweepPoint> pts;
    for (std::size_t i = 0; i < taus_s.size(); ++i) {
        EfficiencyResult r;
        if (model == "fock") {
            r.eta = fock_efficiency(taus_s[i], p);
            r.method = EtaMethod::AnalyticFock;
        } else {
            r.eta = eta_analytic_coherent(taus_s[i], p);
            r.method = EtaMethod::AnalyticCoherent;
        }
        pts.push_back({values[i], r});
    }
    return pts;
}

int run_sweep(const Options& o)
{
    const ExperimentConfig cfg = load(o);
    require(cfg.qubit.has_value(), "qubit");
    require(cfg.sweep.has_value(), "sweep");
    const SweepSection& sw = *cfg.sweep;
    std::vector<double> values;
    try {
        values = sw.expand();
    } catch (const Error& e) {
        throw Error("config", "config-error", "[sweep]: no values to sweep");
    }
    if (values.empty())
        throw Error("config", "config-error", "[sweep]: no values to sweep");

    std::vector<SweepPoint> pts;
    if (sw.model != "pipeline") {
        std::vector<double> taus;
        for (double v : values)
            taus.push_back(v * 1e-9);
        pts = analytic_points(sw.model, taus, values, to_qubit(*cfg.qubit));
    } else {
        require(cfg.pulse.has_value(), "pulse");
        const Scenario base = to_scenario(cfg);
        if (sw.parameter == "tau") {
            std::vector<double> taus;
            for (double v : values)
                taus.push_back(v * 1e-9);
            pts = sweep_tau(base, taus);
        } else if (sw.parameter == "n") {
            pts = sweep_photon_number(base, values);
        } else if (sw.parameter == "m") {
            pts = sweep_phase(base, PhaseSweep::VaryM, values);
        } else {
            std::vector<double> rad;
            for (double v : values)
                rad.push_back(v * std::numbers::pi / 180.0);
            pts = sweep_phase(base, PhaseSweep::VaryTheta, rad);
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
            pts[i].value = values[i];
    }
    Output out(o.out);
    write_sweep_csv(out.data(), sw.parameter, pts, stamp(cfg));
    if (!o.quiet) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].result.eta > pts[best].result.eta)
                best = i;
        out.report() << std::setprecision(6) << "max_eta = " << pts[best].result.eta << " at " << sw.parameter
                     << " = " << pts[best].value << '\n';
    }
    return 0;
}

int run_fit(const Options& o)
{
    if (o.data.empty())
        throw Error("config", "config-error", "--data is required");
    std::ifstream in(o.data);
    if (!in)
        throw Error("config", "config-error", "cannot open " + o.data);
    Output out(o.out);
    if (o.kind == "power") {
        const ExperimentConfig cfg = load(o);
        require(cfg.qubit.has_value(), "qubit");
        const QubitParams p = to_qubit(*cfg.qubit);
        const auto samples = read_power_csv(in);
        const PowerFit fit = fit_power_scan(samples, p.gamma_r(), decoherence_rate(p));
        out.data() << std::setprecision(10) << "k_coupling_rad_s_sqrt_w = " << fit.k << '\n'
                   << "se_k = " << fit.se_k << '\n'
                   << "residual_norm = " << fit.residual_norm << '\n'
                   << "critical_power_dbm = "
                   << watts_to_dbm(critical_power(p.gamma_r(), decoherence_rate(p), fit.k)) << '\n';
        return 0;
    }
    const auto samples = read_spectrum_csv(in);
    try {
        write_fit_result(out.data(), fit_spectrum(samples));
    } catch (const FitDiverged& e) {
        write_fit_result(out.data(), e.best());
        throw;
    }
    return 0;
}

int run_analytic(const Options& o)
{
    const ExperimentConfig cfg = load(o);
    require(cfg.qubit.has_value(), "qubit");
    const QubitParams p = to_qubit(*cfg.qubit);
    const auto times = coherence_times(p);
    const double tau_c = coherent_tau_opt(p);
    const double tau_f = fock_tau_opt(p);
    Output out(o.out);
    auto& os = out.data();
    os << std::setprecision(6) << "gamma_mhz = " << decoherence_rate(p) / kTwoPi * 1e-6 << '\n'
       << "t1_ns = " << times.t1 * 1e9 << '\n'
       << "t2_ns = " << times.t2 * 1e9 << '\n'
       << "dephasing_ratio = " << p.gamma_phi() / p.gamma_r() << '\n'
       << "coherent_tau_opt_ns = " << tau_c * 1e9 << '\n'
       << "coherent_eta_opt = " << eta_analytic_coherent(tau_c, p) << '\n'
       << "fock_tau_opt_ns = " << tau_f * 1e9 << '\n'
       << "fock_eta_opt = " << fock_efficiency(tau_f, p) << '\n';
    if (auto tr = to_transmon(*cfg.qubit))
        os << "transmon_omega_10_ghz = " << transmon_frequency(*tr) * 1e-9 << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Single-photon loading simulator for a two-level emitter in front of a mirror"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "experiment INI file");
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--seed", o.seed, "override the noise seed");
        sub->add_flag("--quiet", o.quiet, "suppress the summary");
    };
    auto* simulate = app.add_subcommand("simulate", "run one pulse and write the field trace");
    auto* fock = app.add_subcommand("fock", "single-photon absorption trace");
    auto* sweep = app.add_subcommand("sweep", "efficiency sweep over tau, n, m or theta");
    auto* fit = app.add_subcommand("fit", "fit reflection data");
    auto* analytic = app.add_subcommand("analytic", "closed-form figures of merit");
    for (auto* sub : {simulate, fock, sweep, fit, analytic})
        common(sub);
    fit->add_option("--data", o.data, "CSV with omega_ghz,re_r,im_r or p_dbm,abs_r")->required();
    fit->add_option("--kind", o.kind, "spectrum or power")->check(CLI::IsMember({"spectrum", "power"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate)
            return run_simulate(o);
        if (*fock)
            return run_fock(o);
        if (*sweep)
            return run_sweep(o);
        if (*fit)
            return run_fit(o);
        return run_analytic(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.module() == "config" ? kExitConfig : kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
