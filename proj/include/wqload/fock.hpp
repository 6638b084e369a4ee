#pragma once

#include <optional>
#include <vector>

#include "wqload/grid.hpp"
#include "wqload/params.hpp"

namespace wqload {

/// Single-photon expectation values for an emitter at an antinode.
struct FockTrajectory
{
    TimeGrid grid;
    std::vector<cplx> c;          // <g,1p| sigma+ |g,0>
    std::vector<double> s_z;      // <g,1p| sigma_z |g,1p>
    std::vector<double> p_e;
    PiecewiseSamples<cplx> xi;    // incident waveform
};

/// Grid for an exponentially rising photon of constant tau, turning off at
/// t = 0: spans [-16 tau, 20 / Gamma] with step min(tau, 1/Gamma) / 4000
/// unless `dt` is given.
TimeGrid fock_grid(double tau, const QubitParams& p, std::optional<double> dt = std::nullopt);

/// xi(t) = sqrt(2 / tau) e^{t / tau} for t < 0, zero afterwards. The pulse is
/// cut at the grid start.
PiecewiseSamples<cplx> xi_exp_rising(double tau, const TimeGrid& grid);

/// Integrates
///   dc/dt    = -gamma c + sqrt(Gamma) conj(xi)
///   ds_z/dt  = -Gamma (1 + s_z) + 2 sqrt(Gamma) (xi c + conj(xi c))
/// from the ground state at the grid start.
FockTrajectory evolve_fock(const PiecewiseSamples<cplx>& xi, const TimeGrid& grid, const QubitParams& p);

/// F_in = |xi|^2 with left/right limits.
PiecewiseSamples<double> fock_input_flux(const FockTrajectory& traj);

/// F_out = |xi|^2 + Gamma (1 + s_z)/2 - sqrt(Gamma) (xi c + conj(xi c)).
PiecewiseSamples<double> fock_output_flux(const FockTrajectory& traj, const QubitParams& p);

/// Output flux of the exponentially rising photon in closed form (t0 = 0).
double fock_output_flux_closed_form(double t, double tau, const QubitParams& p);

/// eta(tau) = 4 Gamma / (tau (gamma + 1/tau) (Gamma + 2/tau)).
double fock_efficiency(double tau, const QubitParams& p);

struct FockEfficiency
{
    double eta;
    double emitted;    // int_0^end F_out dt
    double incident;   // int F_in dt
    double total_out;  // int F_out dt over the whole trace
};

/// Efficiency from integrating the simulated fluxes: emitted energy after
/// t = 0 over incident energy.
FockEfficiency fock_efficiency_numeric(double tau, const QubitParams& p,
                                       std::optional<double> dt = std::nullopt);

/// tau_opt = sqrt(2 / (gamma Gamma)).
double fock_tau_opt(const QubitParams& p);

} // namespace wqload
