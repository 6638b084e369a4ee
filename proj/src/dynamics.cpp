#include "wqload/dynamics.hpp"

#include <cmath>

#include "wqload/error.hpp"

namespace wqload {

TwoLevelState bloch_rhs(const TwoLevelState& y, cplx omega, const QubitParams& p, double detuning)
{
    const double gamma = decoherence_rate(p);
    const cplx ds = -cplx(gamma, detuning) * y.coherence + 0.5 * omega * y.inversion;
    const double dz = -p.gamma_r() * (1.0 + y.inversion) - 2.0 * std::real(std::conj(omega) * y.coherence);
    return {ds, dz};
}

Trajectory evolve(const DriveTrace& drive, const QubitParams& p, double detuning, BlochPoint initial)
{
    const TimeGrid& g = drive.grid;
    if (g.size < 1 || drive.omega.value.size() != g.size || drive.omega.left.size() != g.size)
        throw Error("dynamics", "grid-nonuniform", "drive samples do not match the grid");
    if (4.0 * std::norm(initial.s_minus) + initial.s_z * initial.s_z > 1.0 + 1e-9)
        throw Error("dynamics", "invalid-initial-state", "initial state outside the Bloch ball");

    Trajectory tr;
    tr.grid = g;
    tr.s_minus.resize(g.size);
    tr.s_z.resize(g.size);
    tr.p_e.resize(g.size);

    auto rhs = [&](cplx omega, const TwoLevelState& y) { return bloch_rhs(y, omega, p, detuning); };
    TwoLevelState y{initial.s_minus, initial.s_z};
    for (std::size_t i = 0;; ++i) {
        tr.s_minus[i] = y.coherence;
        tr.s_z[i] = y.inversion;
        tr.p_e[i] = 0.5 * (1.0 + y.inversion);
        if (i + 1 == g.size)
            break;
        y = rk4_step(y, g.step, drive.omega.cell_begin(i), drive.omega.cell_mid(i),
                     drive.omega.cell_end(i), rhs);
        if (!std::isfinite(y.coherence.real()) || !std::isfinite(y.coherence.imag()) ||
            !std::isfinite(y.inversion))
            throw Error("dynamics", "integration-diverged", "non-finite state at t = " + std::to_string(g.at(i + 1)));
    }
    return tr;
}

cplx weak_drive_closed_form(double tau, double omega_peak, const QubitParams& p)
{
    return -omega_peak / (2.0 * (decoherence_rate(p) + 1.0 / tau));
}

} // namespace wqload
