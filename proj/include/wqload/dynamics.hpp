#pragma once

#include <vector>

#include "wqload/grid.hpp"
#include "wqload/params.hpp"
#include "wqload/rk4.hpp"
#include "wqload/waveform.hpp"

namespace wqload {

/// Expectation values of the emitter on the drive grid.
struct Trajectory
{
    TimeGrid grid;
    std::vector<cplx> s_minus;   // <sigma_->
    std::vector<double> s_z;     // <sigma_z>
    std::vector<double> p_e;     // (1 + <sigma_z>) / 2
};

struct BlochPoint
{
    cplx s_minus{};
    double s_z = -1.0;
};

/// Right-hand side of the optical Bloch equations in the frame rotating at
/// the drive frequency:
///   d<s->/dt = -(gamma + i Delta) <s-> + Omega <sz> / 2
///   d<sz>/dt = -Gamma (1 + <sz>) - 2 Re(conj(Omega) <s->)
TwoLevelState bloch_rhs(const TwoLevelState& y, cplx omega, const QubitParams& p, double detuning);

/// Integrates the Bloch equations on the drive grid with fixed-step RK4,
/// starting from `initial` (ground state by default).
/// Throws "integration-diverged" if a non-finite value appears and
/// "invalid-initial-state" outside the Bloch ball.
Trajectory evolve(const DriveTrace& drive, const QubitParams& p, double detuning = 0.0,
                  BlochPoint initial = {});

/// Linear-response value of <sigma_-> at turn-off for an exponentially rising
/// drive Omega_0 e^{(t - t0)/tau} switched on long before t0.
cplx weak_drive_closed_form(double tau, double omega_peak, const QubitParams& p);

} // namespace wqload
