#include "wqload/fock.hpp"

#include <algorithm>
#include <cmath>

#include "wqload/error.hpp"
#include "wqload/rk4.hpp"

namespace wqload {

TimeGrid fock_grid(double tau, const QubitParams& p, std::optional<double> dt)
{
    if (!(tau > 0.0))
        throw Error("fock", "invalid-pulse", "tau must be > 0");
    const double t1 = 1.0 / p.gamma_r();
    const double step = dt.value_or(std::min(tau, t1) / 4000.0);
    return aligned_grid(0.0, step, step, -16.0 * tau, 20.0 * t1);
}

PiecewiseSamples<cplx> xi_exp_rising(double tau, const TimeGrid& grid)
{
    if (grid.size < 2)
        throw Error("fock", "grid-too-short");
    const double peak = std::sqrt(2.0 / tau);
    auto xi = [&](double t) { return cplx(peak * std::exp(t / tau), 0.0); };
    // cells that end at or before t = 0 carry the pulse
    const std::size_t off = grid.nearest(0.0);

    PiecewiseSamples<cplx> out;
    out.value.assign(grid.size, 0.0);
    out.left.assign(grid.size, 0.0);
    out.mid.assign(grid.cells(), 0.0);
    for (std::size_t i = 0; i < off; ++i) {
        out.value[i] = xi(grid.at(i));
        out.mid[i] = xi(grid.at(i) + 0.5 * grid.step);
        out.left[i + 1] = xi(grid.at(i + 1));
    }
    return out;
}

FockTrajectory evolve_fock(const PiecewiseSamples<cplx>& xi, const TimeGrid& grid, const QubitParams& p)
{
    if (xi.value.size() != grid.size || xi.left.size() != grid.size)
        throw Error("fock", "grid-nonuniform", "waveform samples do not match the grid");
    const double gamma = decoherence_rate(p);
    const double rg = std::sqrt(p.gamma_r());
    auto rhs = [&](cplx x, const TwoLevelState& y) -> TwoLevelState {
        const cplx dc = -gamma * y.coherence + rg * std::conj(x);
        const double dz = -p.gamma_r() * (1.0 + y.inversion) + 4.0 * rg * std::real(x * y.coherence);
        return {dc, dz};
    };

    FockTrajectory tr;
    tr.grid = grid;
    tr.xi = xi;
    tr.c.resize(grid.size);
    tr.s_z.resize(grid.size);
    tr.p_e.resize(grid.size);
    TwoLevelState y{};
    for (std::size_t i = 0;; ++i) {
        tr.c[i] = y.coherence;
        tr.s_z[i] = y.inversion;
        tr.p_e[i] = 0.5 * (1.0 + y.inversion);
        if (i + 1 == grid.size)
            break;
        y = rk4_step(y, grid.step, xi.cell_begin(i), xi.cell_mid(i), xi.cell_end(i), rhs);
        if (!std::isfinite(y.inversion) || !std::isfinite(std::abs(y.coherence)))
            throw Error("fock", "integration-diverged");
    }
    return tr;
}

PiecewiseSamples<double> fock_input_flux(const FockTrajectory& traj)
{
    PiecewiseSamples<double> f;
    f.value.resize(traj.grid.size);
    f.left.resize(traj.grid.size);
    for (std::size_t i = 0; i < traj.grid.size; ++i) {
        f.value[i] = std::norm(traj.xi.value[i]);
        f.left[i] = std::norm(traj.xi.left[i]);
    }
    return f;
}

PiecewiseSamples<double> fock_output_flux(const FockTrajectory& traj, const QubitParams& p)
{
    const double g = p.gamma_r();
    const double rg = std::sqrt(g);
    auto flux = [&](cplx xi, std::size_t i) {
        return std::norm(xi) + g * traj.p_e[i] - 2.0 * rg * std::real(xi * traj.c[i]);
    };
    PiecewiseSamples<double> f;
    f.value.resize(traj.grid.size);
    f.left.resize(traj.grid.size);
    for (std::size_t i = 0; i < traj.grid.size; ++i) {
        f.value[i] = flux(traj.xi.value[i], i);
        f.left[i] = flux(traj.xi.left[i], i);
    }
    return f;
}

double fock_efficiency(double tau, const QubitParams& p)
{
    if (!(tau > 0.0))
        throw Error("fock", "invalid-pulse", "tau must be > 0");
    const double g = p.gamma_r();
    return 4.0 * g / (tau * (decoherence_rate(p) + 1.0 / tau) * (g + 2.0 / tau));
}

double fock_output_flux_closed_form(double t, double tau, const QubitParams& p)
{
    const double eta = fock_efficiency(tau, p);
    if (t < 0.0)
        return (1.0 - eta) * 2.0 * std::exp(2.0 * t / tau) / tau;
    return eta * p.gamma_r() * std::exp(-p.gamma_r() * t);
}

FockEfficiency fock_efficiency_numeric(double tau, const QubitParams& p, std::optional<double> dt)
{
    const TimeGrid grid = fock_grid(tau, p, dt);
    const FockTrajectory tr = evolve_fock(xi_exp_rising(tau, grid), grid, p);
    const auto f_in = fock_input_flux(tr);
    const auto f_out = fock_output_flux(tr, p);
    const std::size_t off = grid.nearest(0.0);
    auto id = [](double x) { return x; };

    FockEfficiency r;
    r.incident = trapezoid(grid, f_in, 0, grid.cells(), id);
    r.emitted = trapezoid(grid, f_out, off, grid.cells(), id);
    r.total_out = trapezoid(grid, f_out, 0, grid.cells(), id);
    r.eta = r.emitted / r.incident;
    return r;
}

double fock_tau_opt(const QubitParams& p)
{
    return std::sqrt(2.0 / (decoherence_rate(p) * p.gamma_r()));
}

} // namespace wqload
