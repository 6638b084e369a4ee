#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "wqload/params.hpp"

using namespace wqload;

TEST_CASE("decoherence rate of the two samples")
{
    CHECK(decoherence_rate(sample1()) / kTwoPi == doctest::Approx(0.956e6).epsilon(1e-4));
    CHECK(decoherence_rate(sample2()) / kTwoPi == doctest::Approx(1.054e6).epsilon(1e-4));
    const QubitParams bare(2e6, 0.0, 5e9, RateUnit::Cyclic);
    CHECK(decoherence_rate(bare) / kTwoPi == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("coherence times")
{
    const auto s1 = coherence_times(sample1());
    CHECK(std::abs(s1.t1 - 94.4e-9) < 0.5e-9);
    CHECK(std::abs(s1.t2 - 166e-9) < 0.5e-9);
    const auto s2 = coherence_times(sample2());
    CHECK(std::abs(s2.t1 - 77.8e-9) < 0.5e-9);
    CHECK(std::abs(s2.t2 - 151e-9) < 0.5e-9);
    const QubitParams unit(1.0 / kTwoPi, 0.0, 5e9, RateUnit::Cyclic);
    CHECK(coherence_times(unit).t1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("angular and cyclic units agree")
{
    const QubitParams c(1.686e6, 0.113e6, 4.8514e9, RateUnit::Cyclic);
    const QubitParams a(kTwoPi * 1.686e6, kTwoPi * 0.113e6, kTwoPi * 4.8514e9, RateUnit::Angular);
    CHECK(c.gamma_r() == doctest::Approx(a.gamma_r()).epsilon(1e-15));
    CHECK(c.gamma_phi() == doctest::Approx(a.gamma_phi()).epsilon(1e-15));
    CHECK(c.omega_10() == doctest::Approx(a.omega_10()).epsilon(1e-15));
}

TEST_CASE("dephasing ratios")
{
    CHECK(rel_err(sample1().gamma_phi() / sample1().gamma_r(), 0.067) < 0.01);
    CHECK(rel_err(sample2().gamma_phi() / sample2().gamma_r(), 0.0152) < 0.01);
}

TEST_CASE("transmon frequency")
{
    CHECK(std::abs(transmon_frequency(sample1_energies()) - 4.85e9) < 0.01e9);
    CHECK(std::abs(transmon_frequency(sample2_energies()) - 4.81e9) < 0.01e9);
    const TransmonEnergies sym(3e9, 3e9);
    CHECK(transmon_frequency(sym) == doctest::Approx((2.0 * std::sqrt(2.0) - 1.0) * 3e9).epsilon(1e-14));
}

TEST_CASE("derived coupling")
{
    const QubitParams p = sample1();
    CHECK(p.k_is_derived());
    CHECK(p.k_coupling() == doctest::Approx(2.0 * std::sqrt(p.gamma_r() / (kHbar * p.omega_10()))).epsilon(1e-14));
    const QubitParams q(1.686e6, 0.113e6, 4.8514e9, RateUnit::Cyclic, 123.0);
    CHECK_FALSE(q.k_is_derived());
    CHECK(q.k_coupling() == 123.0);
}

TEST_CASE("eager validation")
{
    check_error_code([] { QubitParams(0.0, 0.1, 5e9, RateUnit::Cyclic); }, "invalid-parameter");
    check_error_code([] { QubitParams(1e6, -0.1, 5e9, RateUnit::Cyclic); }, "invalid-parameter");
    check_error_code([] { QubitParams(1e6, 0.1, 0.0, RateUnit::Cyclic); }, "invalid-parameter");
    check_error_code([] { QubitParams(1e6, 0.1, 5e9, RateUnit::Cyclic, -1.0); }, "invalid-parameter");
    check_error_code([] { QubitParams(1e6, 0.1, 5e9, RateUnit::Cyclic, std::nullopt, 0.0); }, "invalid-parameter");
    check_error_code([] { QubitParams(std::nan(""), 0.1, 5e9, RateUnit::Cyclic); }, "invalid-parameter");
    check_error_code([] { TransmonEnergies(-1.0, 1e9); }, "invalid-parameter");
}

TEST_CASE("with_gamma_phi keeps the other fields")
{
    const QubitParams p = sample1();
    const QubitParams q = p.with_gamma_phi(0.0);
    CHECK(q.gamma_phi() == 0.0);
    CHECK(q.gamma_r() == p.gamma_r());
    CHECK(q.omega_10() == p.omega_10());
    CHECK(decoherence_rate(q) == doctest::Approx(p.gamma_r() / 2.0).epsilon(1e-15));
}
