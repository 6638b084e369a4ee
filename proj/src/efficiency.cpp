#include "wqload/efficiency.hpp"

#include <cmath>
#include <numbers>

#include "wqload/error.hpp"
#include "wqload/fock.hpp"

namespace wqload {

std::string_view to_string(EtaMethod m)
{
    switch (m) {
    case EtaMethod::WindowedVoltage: return "windowed_voltage";
    case EtaMethod::CoherentFlux: return "coherent_flux";
    case EtaMethod::AnalyticCoherent: return "analytic_coherent";
    case EtaMethod::AnalyticFock: return "analytic_fock";
    }
    return "unknown";
}

namespace {

void check_windows(const Windows& w)
{
    if (!(w.t_i < w.t0 && w.t0 < w.t_f))
        throw Error("efficiency", "invalid-windows", "need t_i < t0 < t_f");
}

double window_energy(const TimeGrid& grid, const PiecewiseSamples<cplx>& f, double a, double b, double floor)
{
    const std::size_t i0 = grid.nearest(a);
    const std::size_t i1 = grid.nearest(b);
    return trapezoid(grid, f, i0, i1, [floor](cplx x) { return std::norm(x) - floor; });
}

EfficiencyResult ratio(double e_on, double e_off, const Windows& w, EtaMethod method)
{
    if (!(e_off > 0.0))
        throw Error("efficiency", "reference-energy-nonpositive",
                    "input energy window is at or below the noise floor");
    return {e_on / e_off, e_on, e_off, w, method};
}

} // namespace

EfficiencyResult eta_windowed(const VoltageTrace& v_on, const VoltageTrace& v_off,
                              const NoiseModel& noise, const Windows& w)
{
    check_windows(w);
    const double floor = noise.floor_power();
    const double e_off = window_energy(v_off.grid, v_off.v, w.t_i, w.t0, floor);
    const double e_on = window_energy(v_on.grid, v_on.v, w.t0, w.t_f, floor);
    return ratio(e_on, e_off, w, EtaMethod::WindowedVoltage);
}

EfficiencyResult eta_flux(const FieldTrace& ft, const Windows& w)
{
    check_windows(w);
    const double e_off = window_energy(ft.grid, ft.alpha_in, w.t_i, w.t0, 0.0);
    const double e_on = window_energy(ft.grid, ft.alpha_out, w.t0, w.t_f, 0.0);
    return ratio(e_on, e_off, w, EtaMethod::CoherentFlux);
}

double eta_analytic_coherent(double tau, const QubitParams& p)
{
    if (!(tau > 0.0))
        throw Error("efficiency", "invalid-pulse", "tau must be > 0");
    const double g = decoherence_rate(p);
    const double a = g + 1.0 / tau;
    return p.gamma_r() * p.gamma_r() / (g * tau * a * a);
}

double eta_analytic_square(double width, const QubitParams& p)
{
    if (!(width > 0.0))
        throw Error("efficiency", "invalid-pulse", "width must be > 0");
    const double g = decoherence_rate(p);
    const double x = -std::expm1(-g * width);
    return p.gamma_r() * p.gamma_r() * x * x / (2.0 * g * g * g * width);
}

double coherent_tau_opt(const QubitParams& p)
{
    return 1.0 / decoherence_rate(p);
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double rel_tol)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > rel_tol * 0.5 * (std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

double post_window(const Scenario& s)
{
    return s.post_window.value_or(10.0 * coherence_times(s.qubit).t2);
}

bool has_time_separation(PulseShape shape)
{
    return shape == PulseShape::ExpRising || shape == PulseShape::Square;
}

Windows default_windows(const Scenario& s, const TimeGrid& grid)
{
    const Support sup = pulse_support(s.pulse);
    const double t0 = s.pulse.t_off;
    const double t_f = std::min(t0 + 10.0 * coherence_times(s.qubit).t2, grid.back());
    return {sup.begin, t0, t_f};
}

namespace {

// Moves t_i / t_f to where the noiseless voltage meets the noise amplitude.
Windows noise_windows(const FieldTrace& clean, const NoiseModel& noise, Windows w)
{
    const double threshold = std::sqrt(noise.floor_power());
    const VoltageTrace& off = *clean.v_off;
    const VoltageTrace& on = *clean.v_on;
    const std::size_t i0 = off.grid.nearest(w.t0);
    for (std::size_t i = 0; i < i0; ++i) {
        if (std::abs(off.v.value[i]) >= threshold) {
            w.t_i = std::max(w.t_i, off.grid.at(i));
            break;
        }
    }
    const std::size_t j0 = on.grid.nearest(w.t0);
    for (std::size_t j = on.grid.size; j-- > j0 + 1;) {
        if (std::abs(on.v.value[j]) >= threshold) {
            w.t_f = std::min(w.t_f, on.grid.at(j));
            break;
        }
    }
    if (!(w.t_f > w.t0))
        w.t_f = on.grid.at(std::min(j0 + 1, on.grid.size - 1));
    return w;
}

Scenario with_tau(const Scenario& base, double tau, std::optional<double> n_target)
{
    Scenario s = base;
    s.pulse.tau = tau;
    if (n_target) {
        s.pulse.target_n = *n_target;
        s.pulse.amplitude.reset();
    } else if (base.pulse.amplitude) {
        if (base.pulse.shape == PulseShape::ExpRising) {
            s.pulse.amplitude = match_amplitude(*base.pulse.amplitude, base.pulse.tau, tau, base.pulse.duration());
        } else {
            const double n_ref = photon_number_closed_form(base.pulse, base.qubit);
            PulseSpec unit = s.pulse;
            unit.amplitude = 1.0;
            s.pulse.amplitude = std::sqrt(n_ref / photon_number_closed_form(unit, base.qubit));
        }
    }
    return s;
}

void require_separation(const Scenario& s)
{
    if (!has_time_separation(s.pulse.shape))
        throw Error("efficiency", "no-time-separation",
                    std::string(to_string(s.pulse.shape)) + " pulses overlap absorption and emission");
}

std::vector<SweepPoint> run_points(const std::vector<Scenario>& scenarios, std::span<const double> values)
{
    std::function<SweepPoint(std::size_t)> fn = [&](std::size_t i) {
        return SweepPoint{values[i], measure_efficiency(scenarios[i])};
    };
    return parallel_map<SweepPoint>(scenarios.size(), fn);
}

} // namespace

PipelineResult run_pipeline(const Scenario& s)
{
    const TimeGrid grid = pulse_grid(s.pulse, s.qubit, post_window(s), s.dt);
    PipelineResult r;
    r.drive = drive_trace(s.pulse, s.qubit, grid);
    r.trajectory = evolve(r.drive, s.qubit, s.detuning);
    const FieldTrace bare = output_field(r.drive, r.trajectory, s.qubit);
    const NoiseModel noise = s.noise.value_or(NoiseModel{});
    r.field = synthesize_voltages(bare, s.qubit, noise);

    if (has_time_separation(s.pulse.shape)) {
        const Windows base = default_windows(s, grid);
        Windows w = base;
        if (noise.v_n > 0.0) {
            NoiseModel quiet = noise;
            quiet.v_n = 0.0;
            w = noise_windows(synthesize_voltages(bare, s.qubit, quiet), noise, base);
        }
        r.eta = eta_windowed(*r.field.v_on, *r.field.v_off, noise, w);
        r.eta_flux = eta_flux(r.field, base);
    }
    return r;
}

EfficiencyResult measure_efficiency(const Scenario& s)
{
    require_separation(s);
    return *run_pipeline(s).eta;
}

std::vector<SweepPoint> sweep_tau(const Scenario& base, std::span<const double> taus,
                                  std::optional<double> n_target)
{
    require_separation(base);
    if (taus.empty())
        throw Error("efficiency", "empty-sweep");
    std::vector<Scenario> sc;
    for (double tau : taus) {
        if (!(tau > 0.0))
            throw Error("efficiency", "invalid-pulse", "tau must be > 0");
        sc.push_back(with_tau(base, tau, n_target));
    }
    return run_points(sc, taus);
}

std::vector<SweepPoint> sweep_photon_number(const Scenario& base, std::span<const double> ns)
{
    require_separation(base);
    if (ns.empty())
        throw Error("efficiency", "empty-sweep");
    std::vector<Scenario> sc;
    for (double n : ns) {
        if (!(n > 0.0))
            throw Error("efficiency", "invalid-pulse", "photon number must be > 0");
        Scenario s = base;
        s.pulse.target_n = n;
        s.pulse.amplitude.reset();
        sc.push_back(s);
    }
    return run_points(sc, ns);
}

std::vector<SweepPoint> sweep_phase(const Scenario& base, PhaseSweep mode, std::span<const double> values)
{
    require_separation(base);
    if (values.empty())
        throw Error("efficiency", "empty-sweep");
    std::vector<Scenario> sc;
    for (double v : values) {
        Scenario s = base;
        if (mode == PhaseSweep::VaryM) {
            if (v < 0.0 || v != std::floor(v))
                throw Error("efficiency", "invalid-pulse", "segment count must be a non-negative integer");
            if (v == 0.0)
                s.pulse.phase.reset();
            else
                s.pulse.phase = PhaseSegments{static_cast<int>(v), std::numbers::pi};
        } else {
            if (v < 0.0 || v > 2.0 * std::numbers::pi + 1e-12)
                throw Error("efficiency", "invalid-pulse", "theta must lie in [0, 2 pi]");
            const int m = base.pulse.phase ? base.pulse.phase->m : 50;
            s.pulse.phase = PhaseSegments{m, v};
        }
        sc.push_back(s);
    }
    return run_points(sc, values);
}

TauOptimum optimize_tau(const Scenario& base, double lo_factor, double hi_factor, double rel_tol)
{
    require_separation(base);
    const double inv_gamma = 1.0 / decoherence_rate(base.qubit);
    const double lo = lo_factor * inv_gamma;
    const double hi = hi_factor * inv_gamma;
    Scenario fixed = base;
    if (!fixed.dt) {
        PulseSpec shortest = base.pulse;
        shortest.tau = lo;
        fixed.dt = default_step(shortest, base.qubit);
    }
    const std::optional<double> n = base.pulse.target_n;
    auto eta = [&](double tau) { return measure_efficiency(with_tau(fixed, tau, n)).eta; };
    const double tau = golden_section_max(eta, lo, hi, rel_tol);
    return {tau, eta(tau)};
}

std::vector<DephasingPoint> optimum_vs_dephasing(const QubitParams& p, std::span<const double> ratios)
{
    std::vector<DephasingPoint> out;
    for (double r : ratios) {
        const QubitParams q = p.with_gamma_phi(r * p.gamma_r());
        const double tc = coherent_tau_opt(q);
        const double tf = fock_tau_opt(q);
        out.push_back({r, tc, eta_analytic_coherent(tc, q), tf, fock_efficiency(tf, q)});
    }
    return out;
}

} // namespace wqload
