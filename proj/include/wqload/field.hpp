#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wqload/dynamics.hpp"
#include "wqload/grid.hpp"
#include "wqload/params.hpp"
#include "wqload/waveform.hpp"

namespace wqload {

/// Complex voltage samples on their own grid (the digitizer grid may be
/// coarser than the simulation grid).
struct VoltageTrace
{
    TimeGrid grid;
    PiecewiseSamples<cplx> v;
};

/// Coherent input and output fields in sqrt(photons / s).
struct FieldTrace
{
    TimeGrid grid;
    PiecewiseSamples<cplx> alpha_in;
    PiecewiseSamples<cplx> alpha_out;
    std::vector<double> f_in;    // |alpha_in|^2 (right limits)
    std::vector<double> f_out;   // |alpha_out|^2
    std::vector<cplx> s_minus;
    std::vector<double> s_z;
    std::optional<VoltageTrace> v_on;   // emitter on resonance
    std::optional<VoltageTrace> v_off;  // emitter far detuned: reflected input
};

/// Measurement chain: input-referred white complex Gaussian noise with
/// per-quadrature standard deviation `v_n`, then a scalar gain, then
/// optional boxcar averaging onto bins of `bin` seconds.
struct NoiseModel
{
    double v_n = 0.0;              // V
    std::uint64_t seed = 0;
    std::optional<double> bin;     // s
    double gain_db = 0.0;

    void validate() const;
    double gain() const;
    /// Expected |noise|^2 at the output, i.e. the floor subtracted from |V|^2.
    double floor_power() const;
};

double rabi_from_power(double p_in, double k);
double power_from_rabi(double omega, double k);
cplx alpha_from_rabi(cplx omega, const QubitParams& p);
cplx rabi_from_alpha(cplx alpha, const QubitParams& p);

/// Volts per sqrt(photons / s) at the sample plane: sqrt(2 Z0 hbar omega_10).
double volts_per_amplitude(const QubitParams& p);

/// alpha_in = Omega / (2 sqrt(Gamma)), alpha_out = alpha_in + sqrt(Gamma) <sigma_->.
/// Throws "grid-mismatch" if drive and trajectory grids differ.
FieldTrace output_field(const DriveTrace& drive, const Trajectory& traj, const QubitParams& p);

/// Output with the emitter decoupled (detuned to infinity): alpha_out = alpha_in.
FieldTrace bypass_field(const DriveTrace& drive, const QubitParams& p);

/// Adds v_on (from alpha_out) and v_off (from alpha_in) as seen by the
/// digitizer. Deterministic for a given seed.
FieldTrace synthesize_voltages(FieldTrace ft, const QubitParams& p, const NoiseModel& noise);

} // namespace wqload
