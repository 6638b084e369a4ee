#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "wqload/dynamics.hpp"
#include "wqload/waveform.hpp"

using namespace wqload;

namespace {

DriveTrace constant_drive(cplx omega, double step, std::size_t n)
{
    std::vector<double> t(n);
    std::vector<cplx> w(n, omega);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = step * static_cast<double>(i);
    return DriveTrace::from_samples(t, w);
}

// Bloch equations written for a real drive, without detuning.
TwoLevelState real_rhs(const TwoLevelState& y, double omega, double gamma_r, double gamma)
{
    return {-gamma * y.coherence + omega * y.inversion / 2.0,
            -gamma_r * (1.0 + y.inversion) - 2.0 * omega * y.coherence.real()};
}

} // namespace

TEST_CASE("undriven ground state is a fixed point")
{
    const auto tr = evolve(constant_drive(0.0, 1e-9, 2001), sample1());
    for (std::size_t i = 0; i < tr.grid.size; ++i) {
        CHECK(tr.s_z[i] == -1.0);
        CHECK(tr.s_minus[i] == cplx(0.0));
        CHECK(tr.p_e[i] == 0.0);
    }
}

TEST_CASE("free decay from the excited state")
{
    const QubitParams p = sample1();
    const auto tr = evolve(constant_drive(0.0, 0.1e-9, 5001), p, 0.0, BlochPoint{0.0, 1.0});
    for (std::size_t i = 0; i < tr.grid.size; i += 50) {
        const double oracle = -1.0 + 2.0 * std::exp(-p.gamma_r() * tr.grid.at(i));
        CHECK(std::abs(tr.s_z[i] - oracle) < 1e-12);
        CHECK(tr.s_minus[i] == cplx(0.0));
    }
}

TEST_CASE("weak constant drive reaches the analytic steady state")
{
    const QubitParams p = sample1();
    const double g = decoherence_rate(p);
    const double omega = 0.05 * g;
    const auto tr = evolve(constant_drive(omega, 0.5e-9, 8001), p);
    const double z = -1.0 / (1.0 + omega * omega / (p.gamma_r() * g));
    const cplx s = omega * z / (2.0 * g);
    CHECK(std::abs(tr.s_z.back() - z) < 1e-9);
    CHECK(std::abs(tr.s_minus.back() - s) < 1e-9 * std::abs(s) + 1e-12);
    // Reflection of the steady state against the resonant power formula.
    const double r_ode = 1.0 + 2.0 * p.gamma_r() * tr.s_minus.back().real() / omega;
    const double r_formula = 1.0 - p.gamma_r() * p.gamma_r() / (p.gamma_r() * g + omega * omega);
    CHECK(std::abs(r_ode - r_formula) < 1e-6);
}

TEST_CASE("complex right-hand side reduces to the real-drive equations")
{
    const QubitParams p = sample2();
    const double g = decoherence_rate(p);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const TwoLevelState y{{0.5 * u(rng), 0.5 * u(rng)}, u(rng)};
        const double omega = 1e7 * u(rng);
        const TwoLevelState a = bloch_rhs(y, omega, p, 0.0);
        const TwoLevelState b = real_rhs(y, omega, p.gamma_r(), g);
        CHECK(std::abs(a.coherence - b.coherence) <= 1e-15 * (std::abs(b.coherence) + 1e6));
        CHECK(std::abs(a.inversion - b.inversion) <= 1e-15 * (std::abs(b.inversion) + 1e6));
    }
}

TEST_CASE("detuning enters as a rotation of the coherence")
{
    const QubitParams p = sample1();
    const TwoLevelState y{{0.1, -0.2}, -0.3};
    const double delta = 3e6;
    const auto a = bloch_rhs(y, 0.0, p, delta);
    const auto b = bloch_rhs(y, 0.0, p, 0.0);
    CHECK(std::abs(a.coherence - (b.coherence - cplx(0.0, delta) * y.coherence)) < 1e-6);
    CHECK(a.inversion == b.inversion);
}

TEST_CASE("global phase covariance")
{
    const QubitParams p = sample1();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 1501;
    const double step = 0.5e-9;
    for (int trial = 0; trial < 100; ++trial) {
        const double phi = 2.0 * std::numbers::pi * u(rng);
        const double a = 2e7 * u(rng), f = 1e7 * u(rng), c = 1e7 * u(rng);
        std::vector<double> t(n);
        std::vector<cplx> w(n), wr(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = step * static_cast<double>(i);
            w[i] = cplx(a * std::sin(f * t[i]) + c, 0.3 * a * std::cos(2.0 * f * t[i]));
            wr[i] = std::polar(1.0, phi) * w[i];
        }
        const auto base = evolve(DriveTrace::from_samples(t, w), p, 1e6);
        const auto rot = evolve(DriveTrace::from_samples(t, wr), p, 1e6);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(rot.s_minus[i] - std::polar(1.0, phi) * base.s_minus[i]));
            worst = std::max(worst, std::abs(rot.s_z[i] - base.s_z[i]));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("trajectories stay in the Bloch ball")
{
    const QubitParams p = sample1().with_gamma_phi(0.0);
    const auto tr = evolve(constant_drive(cplx(3e7, 1e7), 0.2e-9, 5001), p);
    for (std::size_t i = 0; i < tr.grid.size; ++i)
        CHECK(4.0 * std::norm(tr.s_minus[i]) + tr.s_z[i] * tr.s_z[i] <= 1.0 + 1e-12);
}

TEST_CASE("relaxation from a mixed state returns to the ground state")
{
    // The Bloch-vector length is not monotone: decay from the centre of the
    // ball lengthens it back to 1.
    const QubitParams p = sample1().with_gamma_phi(0.0);
    const auto tr = evolve(constant_drive(0.0, 1e-9, 2001), p, 0.0, BlochPoint{0.0, 0.0});
    CHECK(std::abs(tr.s_z.front()) < 1e-15);
    CHECK(tr.s_z.back() == doctest::Approx(-1.0 + std::exp(-p.gamma_r() * tr.grid.back())).epsilon(1e-12));
}

TEST_CASE("exponential weak drive matches the linear-response closed form")
{
    const QubitParams p = sample1();
    const double g = decoherence_rate(p);
    CHECK(weak_drive_closed_form(1e3, 1e4, p).real() == doctest::Approx(-1e4 / (2.0 * g)).epsilon(1e-6));

    PulseSpec s;
    s.tau = 120e-9;
    s.t_off = kSample1TurnOff;
    s.amplitude = 1e-12;
    const TimeGrid grid = pulse_grid(s, p, 0.0);
    const DriveTrace d = drive_trace(s, p, grid);
    const auto tr = evolve(d, p);
    const double omega0 = std::abs(d.omega.left[grid.nearest(s.t_off)]);
    const cplx closed = weak_drive_closed_form(s.tau, omega0, p);
    CHECK(closed.real() == doctest::Approx(-omega0 / (2.0 * (g + 1.0 / s.tau))).epsilon(1e-14));
    CHECK(std::abs(tr.s_minus[grid.nearest(s.t_off)] - closed) < 1e-6 * std::abs(closed));
}

TEST_CASE("dynamics error paths")
{
    const QubitParams p = sample1();
    DriveTrace d = constant_drive(1e6, 1e-9, 11);
    d.omega.value.pop_back();
    check_error_code([&] { evolve(d, p); }, "grid-nonuniform");
    check_error_code([&] { evolve(constant_drive(0.0, 1e-9, 11), p, 0.0, BlochPoint{0.8, 0.8}); },
                     "invalid-initial-state");
    check_error_code([&] { evolve(constant_drive(1e300, 1e-6, 50), p); }, "integration-diverged");
    const std::vector<double> t{0.0, 1.0, 3.0};
    const std::vector<cplx> w(3, 0.0);
    check_error_code([&] { DriveTrace::from_samples(t, w); }, "grid-nonuniform");
}
