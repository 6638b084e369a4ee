#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wqload/grid.hpp"
#include "wqload/params.hpp"

namespace wqload {

enum class PulseShape { ExpRising, ExpDecaying, Square, Gaussian };

std::string_view to_string(PulseShape s);
PulseShape parse_shape(std::string_view s);

/// Alternating phase pattern: the pulse-on window is cut into `m` equal
/// segments, each carrying phase 0 on its first half and `theta` on its
/// second half.
struct PhaseSegments
{
    int m = 1;
    double theta = 0.0;  // rad
};

/// Declarative description of an input pulse. Exactly one of `amplitude`
/// (peak voltage at the sample plane) or `target_n` must be set.
struct PulseSpec
{
    PulseShape shape = PulseShape::ExpRising;
    double tau = 0.0;      // s; rise/decay constant, square width or Gaussian FWHM
    double t_start = 0.0;  // s; pulse-on time
    double t_off = 0.0;    // s; turn-off time t0
    std::optional<double> amplitude;
    std::optional<double> target_n;
    std::optional<PhaseSegments> phase;

    void validate() const;
    double duration() const noexcept { return t_off - t_start; }
};

/// Half-open interval [begin, end) outside of which the envelope vanishes.
/// Gaussians are centred at t_off - tau and cut at +-3.5 FWHM; the cut is
/// clamped to t_start.
struct Support
{
    double begin;
    double end;
};
Support pulse_support(const PulseSpec& spec);

/// Envelope with peak voltage `v` at time t. Uses the closed support
/// [begin, end], so an exponentially rising pulse reads V exactly at t0.
double envelope_at(const PulseSpec& spec, double v, double t);

/// Envelope samples with peak voltage `v`. Support edges snap to the nearest
/// node; jumps are carried as separate left/right limits.
/// Throws "grid-too-short" if the grid does not cover the support.
PiecewiseSamples<double> envelope_samples(const PulseSpec& spec, double v, const TimeGrid& grid);

/// Right-limit envelope samples; requires `spec.amplitude`.
std::vector<double> envelope(const PulseSpec& spec, const TimeGrid& grid);

/// Simulation grid for a pulse: covers [min(t_start, support), support end
/// + post_window], keeps every pulse edge and phase boundary on a node, and
/// uses step <= dt (default min(tau, T2) / 1000, capped at 0.5 ns).
TimeGrid pulse_grid(const PulseSpec& spec, const QubitParams& p, double post_window,
                    std::optional<double> dt = std::nullopt);

double default_step(const PulseSpec& spec, const QubitParams& p);

/// Average photon number N = int V(t)^2 / (2 Z0) dt / (hbar omega_10) of the
/// sampled envelope (Simpson on the two-sided samples). Requires amplitude.
double photon_number(const PulseSpec& spec, const QubitParams& p, const TimeGrid& grid);

/// Closed-form N for ExpRising, ExpDecaying and Square; Gaussian ignores
/// the +-3.5 FWHM cut.
double photon_number_closed_form(const PulseSpec& spec, const QubitParams& p);

/// Peak voltage realising `spec.target_n` on this grid, or `spec.amplitude`.
double resolve_amplitude(const PulseSpec& spec, const QubitParams& p, const TimeGrid& grid);

/// Voltage V_i of an exponentially rising pulse with constant tau_i that has
/// the same photon number as the reference (v_ref, tau_ref); `duration` is the
/// pulse-on time t0 - t_start.
double match_amplitude(double v_ref, double tau_ref, double tau_i, double duration);

/// Phase f(theta, t) of the segment pattern, zero outside [t_start, t_off).
double phase_at(int m, double theta, double t_start, double t_off, double t);

/// Per-node phase samples. Segment boundaries that fall between nodes are
/// moved to the nearest node.
PiecewiseSamples<double> phase_samples(int m, double theta, double t_start, double t_off,
                                       const TimeGrid& grid);

std::vector<double> phase_schedule(int m, double theta, double t_start, double t_off,
                                   const TimeGrid& grid);

/// Complex Rabi frequency on a grid, Omega(t) = e^{i f(t)} k sqrt(P_in(t)).
struct DriveTrace
{
    TimeGrid grid;
    PiecewiseSamples<cplx> omega;

    /// Drive from arbitrary uniformly spaced samples (no jumps, linear
    /// interpolation at half steps). Throws "grid-nonuniform".
    static DriveTrace from_samples(std::span<const double> t, std::span<const cplx> omega);
};

DriveTrace drive_trace(const PulseSpec& spec, const QubitParams& p, const TimeGrid& grid);

} // namespace wqload
