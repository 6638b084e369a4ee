#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "wqload/waveform.hpp"

using namespace wqload;

namespace {

PulseSpec rising(double tau, double v = 1.0)
{
    PulseSpec s;
    s.shape = PulseShape::ExpRising;
    s.tau = tau;
    s.t_start = 0.0;
    s.t_off = kSample1TurnOff;
    s.amplitude = v;
    return s;
}

double watts_from_dbm(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

} // namespace

TEST_CASE("shape names round trip")
{
    for (auto s : {PulseShape::ExpRising, PulseShape::ExpDecaying, PulseShape::Square, PulseShape::Gaussian})
        CHECK(parse_shape(to_string(s)) == s);
    check_error_code([] { parse_shape("triangle"); }, "unknown-shape");
}

TEST_CASE("exponentially rising envelope")
{
    const PulseSpec s = rising(145e-9, 2.0);
    CHECK(envelope_at(s, 2.0, s.t_off) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(envelope_at(s, 2.0, s.t_off - s.tau) == doctest::Approx(2.0 / std::numbers::e).epsilon(1e-12));
    CHECK(envelope_at(s, 2.0, s.t_off + 1e-9) == 0.0);
    CHECK(envelope_at(s, 2.0, -1e-9) == 0.0);

    const TimeGrid g = pulse_grid(s, sample1(), 1e-6);
    const auto env = envelope_samples(s, 2.0, g);
    const std::size_t i0 = g.nearest(s.t_off);
    CHECK(g.at(i0) == doctest::Approx(s.t_off).epsilon(1e-12));
    CHECK(env.left[i0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(env.value[i0] == 0.0);
}

TEST_CASE("envelope is nonnegative for every shape")
{
    for (auto shape : {PulseShape::ExpRising, PulseShape::ExpDecaying, PulseShape::Square, PulseShape::Gaussian}) {
        PulseSpec s = rising(145e-9);
        s.shape = shape;
        if (shape == PulseShape::Square)
            s.t_start = 1e-6;
        const TimeGrid g = pulse_grid(s, sample1(), 0.5e-6);
        for (double v : envelope(s, g))
            CHECK(v >= 0.0);
    }
}

TEST_CASE("envelope needs a grid covering the support")
{
    const PulseSpec s = rising(145e-9);
    const TimeGrid g{1e-6, 1e-9, 100};
    check_error_code([&] { envelope(s, g); }, "grid-too-short");
}

TEST_CASE("pulse validation")
{
    PulseSpec s = rising(145e-9);
    s.tau = 0.0;
    check_error_code([&] { s.validate(); }, "invalid-pulse");
    s = rising(145e-9);
    s.target_n = 1.0;
    check_error_code([&] { s.validate(); }, "invalid-pulse");
    s = rising(145e-9);
    s.t_off = s.t_start;
    check_error_code([&] { s.validate(); }, "invalid-pulse");
    s = rising(145e-9);
    s.shape = PulseShape::Square;
    s.tau = 3e-6;
    check_error_code([&] { s.validate(); }, "invalid-pulse");
}

TEST_CASE("photon number of a -144 dBm exponential pulse")
{
    const QubitParams p = sample1();
    const double v = std::sqrt(2.0 * p.z0() * watts_from_dbm(-144.0));
    const PulseSpec s = rising(145e-9, v);
    const double n = photon_number(s, p, pulse_grid(s, p, 0.0));
    CHECK(std::abs(n - 0.090) < 0.002);
    // Independent closed form: P tau / (2 hbar omega) for t0 >> tau.
    const double oracle = watts_from_dbm(-144.0) * 145e-9 / (2.0 * kHbar * p.omega_10());
    CHECK(n == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(photon_number_closed_form(s, p) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("photon number of zero field and of a square pulse")
{
    const QubitParams p = sample1();
    PulseSpec s = rising(145e-9, 0.0);
    CHECK(photon_number(s, p, pulse_grid(s, p, 0.0)) == 0.0);

    const double power = 1e-17;
    s.shape = PulseShape::Square;
    s.t_start = 1e-6;
    s.amplitude = std::sqrt(2.0 * p.z0() * power);
    const double oracle = power * s.tau / (kHbar * p.omega_10());
    CHECK(photon_number(s, p, pulse_grid(s, p, 0.0)) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(photon_number_closed_form(s, p) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("gaussian photon number matches the untruncated integral")
{
    const QubitParams p = sample1();
    PulseSpec s = rising(145e-9, 1e-6);
    s.shape = PulseShape::Gaussian;
    // sigma of |V|^2 is FWHM / (2 sqrt(2 ln 2)) / sqrt(2).
    const double sigma = s.tau / (2.0 * std::sqrt(2.0 * std::numbers::ln2)) / std::sqrt(2.0);
    const double oracle = 1e-12 / (2.0 * p.z0()) * sigma * std::sqrt(2.0 * std::numbers::pi) / (kHbar * p.omega_10());
    CHECK(photon_number(s, p, pulse_grid(s, p, 0.0)) == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("match_amplitude")
{
    CHECK(match_amplitude(1.3, 145e-9, 145e-9, kSample1TurnOff) == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(match_amplitude(1.0, 145e-9, 40e-9, kSample1TurnOff) ==
          doctest::Approx(std::sqrt(145.0 / 40.0)).epsilon(1e-6));
    CHECK(std::abs(match_amplitude(1.0, 145e-9, 40e-9, kSample1TurnOff) - 1.904) < 5e-4);
    // Short pulse on: the exponential factors matter.
    const double d = 100e-9;
    const double oracle = std::sqrt(145e-9 * -std::expm1(-2.0 * d / 145e-9) / (40e-9 * -std::expm1(-2.0 * d / 40e-9)));
    CHECK(match_amplitude(1.0, 145e-9, 40e-9, d) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("matched amplitudes keep the photon number across tau")
{
    const QubitParams p = sample1();
    const PulseSpec ref = rising(145e-9, 1e-7);
    const double n_ref = photon_number(ref, p, pulse_grid(ref, p, 0.0));
    for (double tau_ns = 20.0; tau_ns <= 600.0; tau_ns += 29.0) {
        PulseSpec s = rising(tau_ns * 1e-9);
        s.amplitude = match_amplitude(*ref.amplitude, ref.tau, s.tau, s.duration());
        const double n = photon_number(s, p, pulse_grid(s, p, 0.0));
        CHECK(rel_err(n, n_ref) < 1e-9);
    }
}

TEST_CASE("target photon number is realised")
{
    const QubitParams p = sample1();
    PulseSpec s = rising(166e-9);
    s.amplitude.reset();
    s.target_n = 0.25;
    const TimeGrid g = pulse_grid(s, p, 0.0);
    PulseSpec fixed = s;
    fixed.target_n.reset();
    fixed.amplitude = resolve_amplitude(s, p, g);
    CHECK(photon_number(fixed, p, g) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("phase schedule")
{
    const TimeGrid g{0.0, 1e-9, 4001};
    SUBCASE("theta = 0 is no modulation")
    {
        for (double f : phase_schedule(7, 0.0, 0.0, 4e-6, g))
            CHECK(f == 0.0);
    }
    SUBCASE("one segment")
    {
        const auto f = phase_schedule(1, std::numbers::pi, 0.0, 4e-6, g);
        CHECK(f[g.nearest(1e-6)] == 0.0);
        CHECK(f[g.nearest(1.999e-6)] == 0.0);
        CHECK(f[g.nearest(2e-6)] == std::numbers::pi);
        CHECK(f[g.nearest(3.999e-6)] == std::numbers::pi);
        CHECK(f[g.nearest(4e-6)] == 0.0);
    }
    SUBCASE("two segments")
    {
        const double th = 1.1;
        const auto f = phase_schedule(2, th, 0.0, 4e-6, g);
        CHECK(f[g.nearest(0.5e-6)] == 0.0);
        CHECK(f[g.nearest(1.5e-6)] == th);
        CHECK(f[g.nearest(2.5e-6)] == 0.0);
        CHECK(f[g.nearest(3.5e-6)] == th);
        CHECK(f[g.nearest(0.999e-6)] == 0.0);
        CHECK(f[g.nearest(1e-6)] == th);
        CHECK(f[g.nearest(2e-6)] == 0.0);
        CHECK(f[g.nearest(3e-6)] == th);
    }
    SUBCASE("two values and balanced halves")
    {
        const TimeGrid h{0.0, 0.7e-9, 4000};
        const int m = 13;
        const double th = 2.0;
        const auto f = phase_schedule(m, th, 0.0, 2.7e-6, h);
        std::vector<int> lo(m, 0), hi(m, 0);
        for (std::size_t i = 0; i + 1 < h.size; ++i) {
            const double t = h.at(i);
            CHECK((f[i] == 0.0 || f[i] == th));
            if (t >= 2.7e-6)
                continue;
            const int seg = std::min(m - 1, static_cast<int>(t / (2.7e-6 / m)));
            (f[i] == 0.0 ? lo : hi)[seg]++;
        }
        for (int k = 0; k < m; ++k)
            CHECK(std::abs(lo[k] - hi[k]) <= 2);
    }
    CHECK(phase_at(1, std::numbers::pi, 0.0, 4e-6, 3e-6) == std::numbers::pi);
    CHECK(phase_at(1, std::numbers::pi, 0.0, 4e-6, 5e-6) == 0.0);
}

TEST_CASE("drive trace phase")
{
    const QubitParams p = sample1();
    PulseSpec s = rising(166e-9, 1e-6);
    const TimeGrid g = pulse_grid(s, p, 0.2e-6);
    const DriveTrace plain = drive_trace(s, p, g);
    for (std::size_t i = 0; i < g.size; ++i) {
        CHECK(plain.omega.value[i].imag() == 0.0);
        CHECK(plain.omega.value[i].real() >= 0.0);
    }
    s.phase = PhaseSegments{4, std::numbers::pi};
    const DriveTrace flipped = drive_trace(s, p, g);
    for (std::size_t i = 0; i < g.size; ++i) {
        const double f = phase_schedule(4, std::numbers::pi, s.t_start, s.t_off, g)[i];
        const double sign = f == 0.0 ? 1.0 : -1.0;
        CHECK(std::abs(flipped.omega.value[i] - sign * plain.omega.value[i]) <= 1e-15 * std::abs(plain.omega.value[i]) + 1e-300);
    }
    // Omega = k sqrt(P) at the peak.
    const double peak = p.k_coupling() * std::sqrt(1e-12 / (2.0 * p.z0()));
    CHECK(std::abs(plain.omega.left[g.nearest(s.t_off)]) == doctest::Approx(peak).epsilon(1e-12));
}

TEST_CASE("default step and grid alignment")
{
    const QubitParams p = sample1();
    const PulseSpec s = rising(145e-9);
    CHECK(default_step(s, p) == doctest::Approx(0.145e-9).epsilon(1e-12));
    PulseSpec slow = rising(2e-6);
    CHECK(default_step(slow, p) == doctest::Approx(0.5e-9 < coherence_times(p).t2 / 1000 ? 0.5e-9 : coherence_times(p).t2 / 1000).epsilon(1e-12));
    const TimeGrid g = pulse_grid(s, p, 1e-6);
    CHECK(g.step <= default_step(s, p) * (1 + 1e-12));
    CHECK(g.start <= 0.0);
    CHECK(g.back() >= s.t_off + 1e-6 - g.step);
    CHECK(std::abs(g.at(g.nearest(s.t_off)) - s.t_off) < 1e-12 * s.t_off);
}
