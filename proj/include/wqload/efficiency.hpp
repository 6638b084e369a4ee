#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "wqload/dynamics.hpp"
#include "wqload/field.hpp"
#include "wqload/params.hpp"
#include "wqload/waveform.hpp"

namespace wqload {

enum class EtaMethod { WindowedVoltage, CoherentFlux, AnalyticCoherent, AnalyticFock };

std::string_view to_string(EtaMethod m);

/// Integration windows: input energy over [t_i, t0], emission over [t0, t_f].
struct Windows
{
    double t_i;
    double t0;
    double t_f;
};

struct EfficiencyResult
{
    double eta = 0.0;
    double e_on = 0.0;
    double e_off = 0.0;
    Windows windows{};
    EtaMethod method = EtaMethod::WindowedVoltage;
};

/// eta = E_on / E_off with E = int (|V|^2 - |V_N|^2) dt by the trapezoid
/// rule. Negative integrand values are kept. Throws
/// "reference-energy-nonpositive" when E_off <= 0.
EfficiencyResult eta_windowed(const VoltageTrace& v_on, const VoltageTrace& v_off,
                              const NoiseModel& noise, const Windows& w);

/// Same ratio on the noiseless coherent fluxes |alpha_out|^2 and |alpha_in|^2.
EfficiencyResult eta_flux(const FieldTrace& ft, const Windows& w);

/// Weak-drive efficiency of an exponentially rising pulse,
/// Gamma^2 / (gamma tau (gamma + 1/tau)^2).
double eta_analytic_coherent(double tau, const QubitParams& p);

/// Weak-drive efficiency of a square pulse of width T from the linearised
/// Bloch equations, Gamma^2 (1 - e^{-gamma T})^2 / (2 gamma^3 T).
double eta_analytic_square(double width, const QubitParams& p);

/// tau maximising eta_analytic_coherent, i.e. 1 / gamma.
double coherent_tau_opt(const QubitParams& p);

/// Maximises f on [lo, hi] by golden-section search; returns the argmax.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double rel_tol);

/// One simulate-and-measure run.
struct Scenario
{
    QubitParams qubit;
    PulseSpec pulse;
    std::optional<double> dt;            // s; default from the pulse
    std::optional<double> post_window;   // s; default 10 T2
    double detuning = 0.0;               // rad/s
    std::optional<NoiseModel> noise;     // noiseless when absent
};

struct PipelineResult
{
    DriveTrace drive;
    Trajectory trajectory;
    FieldTrace field;                        // with v_on / v_off
    std::optional<EfficiencyResult> eta;     // windowed voltage, when defined
    std::optional<EfficiencyResult> eta_flux;
};

double post_window(const Scenario& s);

/// Windows from the pulse: t_i at the pulse start, t_f = t0 + 10 T2
/// (clipped to the grid). With noise, t_i / t_f move to where the noiseless
/// signal meets the noise floor.
Windows default_windows(const Scenario& s, const TimeGrid& grid);

bool has_time_separation(PulseShape shape);

PipelineResult run_pipeline(const Scenario& s);

/// Efficiency of a scenario. Throws "no-time-separation" for pulse shapes
/// without separate absorption and emission phases.
EfficiencyResult measure_efficiency(const Scenario& s);

struct SweepPoint
{
    double value;
    EfficiencyResult result;
};

/// One pipeline run per tau. With `n_target` every point has that photon
/// number; otherwise amplitudes follow match_amplitude from the template's
/// (amplitude, tau).
std::vector<SweepPoint> sweep_tau(const Scenario& base, std::span<const double> taus,
                                  std::optional<double> n_target = std::nullopt);

std::vector<SweepPoint> sweep_photon_number(const Scenario& base, std::span<const double> ns);

enum class PhaseSweep { VaryM, VaryTheta };

/// VaryM: theta = pi, values are segment counts (0 means no modulation).
/// VaryTheta: values are theta in rad with the template's segment count, or
/// 50 segments when the template has none.
std::vector<SweepPoint> sweep_phase(const Scenario& base, PhaseSweep mode, std::span<const double> values);

struct TauOptimum
{
    double tau;
    double eta;
};

/// Golden-section search of the pipeline efficiency over tau in
/// [0.05, 20] / gamma (relative tolerance 1e-6). All evaluations share one
/// step size so the objective is smooth in tau.
TauOptimum optimize_tau(const Scenario& base, double lo_factor = 0.05, double hi_factor = 20.0,
                        double rel_tol = 1e-6);

/// Optimal tau and efficiency for coherent and single-photon input as a
/// function of Gamma_phi / Gamma.
struct DephasingPoint
{
    double ratio;
    double tau_coherent;
    double eta_coherent;
    double tau_fock;
    double eta_fock;
};
std::vector<DephasingPoint> optimum_vs_dephasing(const QubitParams& p, std::span<const double> ratios);

/// Runs fn(i) for i in [0, n) on worker threads; results keep input order.
/// The first exception thrown by any call is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn)
{
    std::vector<std::optional<T>> slots(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                std::lock_guard lock(error_lock);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < std::min(hw, n); ++k)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace wqload
