#include "wqload/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wqload/error.hpp"

namespace wqload {

namespace {

constexpr double kGaussianCut = 3.5;  // FWHM on each side of the centre

[[noreturn]] void fail(const char* code, const std::string& detail)
{
    throw Error("waveform", code, detail);
}

// Envelope formula without the support cut.
double shape_value(const PulseSpec& s, double v, double t)
{
    switch (s.shape) {
    case PulseShape::ExpRising:
        return v * std::exp((t - s.t_off) / s.tau);
    case PulseShape::ExpDecaying:
        return v * std::exp(-(t - s.t_start) / s.tau);
    case PulseShape::Square:
        return v;
    case PulseShape::Gaussian: {
        const double x = (t - (s.t_off - s.tau)) / s.tau;
        return v * std::exp(-4.0 * std::numbers::ln2 * x * x);
    }
    }
    return 0.0;
}

// Which cells [t_i, t_i+1] lie inside [first, last).
struct CellRange
{
    std::size_t first;
    std::size_t last;
    bool contains(std::size_t cell) const { return cell >= first && cell < last; }
};

CellRange support_cells(const PulseSpec& spec, const TimeGrid& grid)
{
    const Support sup = pulse_support(spec);
    const double tol = 0.5 * grid.step;
    if (grid.size < 2 || grid.start > sup.begin + tol || grid.back() < sup.end - tol)
        fail("grid-too-short", "grid does not cover the pulse support");
    return {grid.nearest(sup.begin), grid.nearest(sup.end)};
}

} // namespace

std::string_view to_string(PulseShape s)
{
    switch (s) {
    case PulseShape::ExpRising: return "exp_rising";
    case PulseShape::ExpDecaying: return "exp_decaying";
    case PulseShape::Square: return "square";
    case PulseShape::Gaussian: return "gaussian";
    }
    return "unknown";
}

PulseShape parse_shape(std::string_view s)
{
    if (s == "exp_rising") return PulseShape::ExpRising;
    if (s == "exp_decaying") return PulseShape::ExpDecaying;
    if (s == "square") return PulseShape::Square;
    if (s == "gaussian") return PulseShape::Gaussian;
    fail("unknown-shape", std::string(s));
}

void PulseSpec::validate() const
{
    if (!(tau > 0.0) || !std::isfinite(tau))
        fail("invalid-pulse", "tau must be > 0");
    if (!(t_off > t_start))
        fail("invalid-pulse", "t_off must be after t_start");
    if (amplitude.has_value() == target_n.has_value())
        fail("invalid-pulse", "exactly one of amplitude and target_n must be set");
    if (amplitude && !(*amplitude >= 0.0))
        fail("invalid-pulse", "amplitude must be >= 0");
    if (target_n && !(*target_n >= 0.0))
        fail("invalid-pulse", "target_n must be >= 0");
    if (phase && phase->m < 1)
        fail("invalid-pulse", "phase segment count must be >= 1");
    if (shape == PulseShape::Square && t_off - tau < t_start - 1e-15)
        fail("invalid-pulse", "square pulse must start after t_start");
}

Support pulse_support(const PulseSpec& s)
{
    switch (s.shape) {
    case PulseShape::ExpRising:
    case PulseShape::ExpDecaying:
        return {s.t_start, s.t_off};
    case PulseShape::Square:
        return {s.t_off - s.tau, s.t_off};
    case PulseShape::Gaussian: {
        const double centre = s.t_off - s.tau;
        return {std::max(s.t_start, centre - kGaussianCut * s.tau), centre + kGaussianCut * s.tau};
    }
    }
    return {s.t_start, s.t_off};
}

double envelope_at(const PulseSpec& spec, double v, double t)
{
    const Support sup = pulse_support(spec);
    if (t < sup.begin || t > sup.end)
        return 0.0;
    return shape_value(spec, v, t);
}

PiecewiseSamples<double> envelope_samples(const PulseSpec& spec, double v, const TimeGrid& grid)
{
    spec.validate();
    const CellRange in = support_cells(spec, grid);
    PiecewiseSamples<double> out;
    out.value.assign(grid.size, 0.0);
    out.left.assign(grid.size, 0.0);
    out.mid.assign(grid.cells(), 0.0);
    for (std::size_t i = in.first; i < in.last; ++i) {
        const double t = grid.at(i);
        out.value[i] = shape_value(spec, v, t);
        out.mid[i] = shape_value(spec, v, t + 0.5 * grid.step);
        out.left[i + 1] = shape_value(spec, v, grid.at(i + 1));
    }
    return out;
}

std::vector<double> envelope(const PulseSpec& spec, const TimeGrid& grid)
{
    if (!spec.amplitude)
        fail("amplitude-unresolved", "envelope needs an explicit amplitude");
    return envelope_samples(spec, *spec.amplitude, grid).value;
}

double default_step(const PulseSpec& spec, const QubitParams& p)
{
    const double t2 = coherence_times(p).t2;
    return std::min(std::min(spec.tau, t2) / 1000.0, 0.5e-9);
}

TimeGrid pulse_grid(const PulseSpec& spec, const QubitParams& p, double post_window,
                    std::optional<double> dt)
{
    spec.validate();
    if (post_window < 0.0)
        fail("invalid-grid", "post window must be >= 0");
    const double step = dt.value_or(default_step(spec, p));
    double period = spec.duration();
    switch (spec.shape) {
    case PulseShape::ExpRising:
    case PulseShape::ExpDecaying:
        if (spec.phase)
            period /= 2.0 * spec.phase->m;
        break;
    case PulseShape::Square:
        period = spec.tau;
        break;
    case PulseShape::Gaussian:
        period = 0.5 * spec.tau;
        break;
    }
    const Support sup = pulse_support(spec);
    const double begin = std::min(spec.t_start, sup.begin);
    const double end = std::max(spec.t_off, sup.end) + post_window;
    return aligned_grid(spec.t_off, period, step, begin, end);
}

double photon_number(const PulseSpec& spec, const QubitParams& p, const TimeGrid& grid)
{
    if (!spec.amplitude)
        fail("amplitude-unresolved", "photon_number needs an explicit amplitude");
    const auto env = envelope_samples(spec, *spec.amplitude, grid);
    const double energy =
        simpson(grid, env, 0, grid.cells(), [&](double v) { return v * v / (2.0 * p.z0()); });
    return energy / (kHbar * p.omega_10());
}

double photon_number_closed_form(const PulseSpec& spec, const QubitParams& p)
{
    if (!spec.amplitude)
        fail("amplitude-unresolved", "photon_number needs an explicit amplitude");
    const double v = *spec.amplitude;
    const double peak_power = v * v / (2.0 * p.z0());
    double seconds = 0.0;
    switch (spec.shape) {
    case PulseShape::ExpRising:
    case PulseShape::ExpDecaying:
        seconds = 0.5 * spec.tau * -std::expm1(-2.0 * spec.duration() / spec.tau);
        break;
    case PulseShape::Square:
        seconds = spec.tau;
        break;
    case PulseShape::Gaussian:
        seconds = spec.tau * std::sqrt(std::numbers::pi / (8.0 * std::numbers::ln2));
        break;
    }
    return peak_power * seconds / (kHbar * p.omega_10());
}

double resolve_amplitude(const PulseSpec& spec, const QubitParams& p, const TimeGrid& grid)
{
    spec.validate();
    if (spec.amplitude)
        return *spec.amplitude;
    if (*spec.target_n == 0.0)
        return 0.0;
    PulseSpec unit = spec;
    unit.amplitude = 1.0;
    unit.target_n.reset();
    return std::sqrt(*spec.target_n / photon_number(unit, p, grid));
}

double match_amplitude(double v_ref, double tau_ref, double tau_i, double duration)
{
    if (!(tau_ref > 0.0 && tau_i > 0.0 && duration > 0.0))
        fail("invalid-pulse", "match_amplitude needs positive times");
    const double num = -std::expm1(-2.0 * duration / tau_ref);
    const double den = -std::expm1(-2.0 * duration / tau_i);
    return v_ref * std::sqrt(tau_ref / tau_i) * std::sqrt(num / den);
}

double phase_at(int m, double theta, double t_start, double t_off, double t)
{
    if (m < 1 || t < t_start || t >= t_off)
        return 0.0;
    const double half = (t_off - t_start) / (2.0 * m);
    const auto h = std::min(static_cast<long>(std::floor((t - t_start) / half)), 2L * m - 1);
    return (h % 2 == 1) ? theta : 0.0;
}

PiecewiseSamples<double> phase_samples(int m, double theta, double t_start, double t_off,
                                       const TimeGrid& grid)
{
    if (m < 1)
        fail("invalid-pulse", "phase segment count must be >= 1");
    PiecewiseSamples<double> out;
    out.value.resize(grid.size);
    out.left.resize(grid.size);
    out.mid.resize(grid.cells());
    for (std::size_t i = 0; i < grid.cells(); ++i)
        out.mid[i] = phase_at(m, theta, t_start, t_off, grid.at(i) + 0.5 * grid.step);
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double direct = phase_at(m, theta, t_start, t_off, grid.at(i));
        out.value[i] = i < grid.cells() ? out.mid[i] : direct;
        out.left[i] = i > 0 ? out.mid[i - 1] : direct;
    }
    return out;
}

std::vector<double> phase_schedule(int m, double theta, double t_start, double t_off,
                                   const TimeGrid& grid)
{
    return phase_samples(m, theta, t_start, t_off, grid).value;
}

DriveTrace DriveTrace::from_samples(std::span<const double> t, std::span<const cplx> omega)
{
    if (t.size() != omega.size())
        throw Error("waveform", "size-mismatch", "times and samples differ in length");
    DriveTrace d;
    d.grid = grid_from_times(t, "waveform");
    d.omega.value.assign(omega.begin(), omega.end());
    d.omega.left = d.omega.value;
    for (const cplx& w : omega)
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw Error("waveform", "non-finite-drive");
    return d;
}

DriveTrace drive_trace(const PulseSpec& spec, const QubitParams& p, const TimeGrid& grid)
{
    const double v = resolve_amplitude(spec, p, grid);
    const auto env = envelope_samples(spec, v, grid);
    const double scale = p.k_coupling() / std::sqrt(2.0 * p.z0());

    DriveTrace d;
    d.grid = grid;
    auto convert = [&](const std::vector<double>& e, const std::vector<double>* ph) {
        std::vector<cplx> w(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            w[i] = ph ? std::polar(scale * e[i], (*ph)[i]) : cplx(scale * e[i], 0.0);
        return w;
    };
    if (spec.phase) {
        const auto ph = phase_samples(spec.phase->m, spec.phase->theta, spec.t_start, spec.t_off, grid);
        d.omega.value = convert(env.value, &ph.value);
        d.omega.left = convert(env.left, &ph.left);
        d.omega.mid = convert(env.mid, &ph.mid);
    } else {
        d.omega.value = convert(env.value, nullptr);
        d.omega.left = convert(env.left, nullptr);
        d.omega.mid = convert(env.mid, nullptr);
    }
    return d;
}

} // namespace wqload
