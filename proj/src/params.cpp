#include "wqload/params.hpp"

#include <cmath>

#include "wqload/error.hpp"

namespace wqload {

namespace {

void require(bool ok, const char* what)
{
    if (!ok)
        throw Error("params", "invalid-parameter", what);
}

} // namespace

double derived_coupling(double gamma_r, double omega_10)
{
    return 2.0 * std::sqrt(gamma_r / (kHbar * omega_10));
}

QubitParams::QubitParams(double gamma_r, double gamma_phi, double omega_10, RateUnit unit,
                         std::optional<double> k_coupling, double z0, std::string label)
    : z0_(z0), label_(std::move(label))
{
    const double scale = unit == RateUnit::Cyclic ? kTwoPi : 1.0;
    gamma_r_ = gamma_r * scale;
    gamma_phi_ = gamma_phi * scale;
    omega_10_ = omega_10 * scale;

    require(std::isfinite(gamma_r_) && gamma_r_ > 0.0, "gamma_r must be > 0");
    require(std::isfinite(gamma_phi_) && gamma_phi_ >= 0.0, "gamma_phi must be >= 0");
    require(std::isfinite(omega_10_) && omega_10_ > 0.0, "omega_10 must be > 0");
    require(std::isfinite(z0_) && z0_ > 0.0, "z0 must be > 0");

    k_derived_ = !k_coupling.has_value();
    k_coupling_ = k_coupling.value_or(derived_coupling(gamma_r_, omega_10_));
    require(std::isfinite(k_coupling_) && k_coupling_ > 0.0, "k_coupling must be > 0");
}

QubitParams QubitParams::with_gamma_phi(double gamma_phi) const
{
    std::optional<double> k;
    if (!k_derived_)
        k = k_coupling_;
    return QubitParams(gamma_r_, gamma_phi, omega_10_, RateUnit::Angular, k, z0_, label_);
}

TransmonEnergies::TransmonEnergies(double e_c_hz, double e_j_hz) : e_c(e_c_hz), e_j(e_j_hz)
{
    require(e_c > 0.0 && e_j > 0.0, "transmon energies must be > 0");
}

double decoherence_rate(const QubitParams& p)
{
    return 0.5 * p.gamma_r() + p.gamma_phi();
}

CoherenceTimes coherence_times(const QubitParams& p)
{
    return {1.0 / p.gamma_r(), 1.0 / decoherence_rate(p)};
}

double transmon_frequency(const TransmonEnergies& e)
{
    return std::sqrt(8.0 * e.e_j * e.e_c) - e.e_c;
}

QubitParams sample1()
{
    return QubitParams(1.686e6, 0.113e6, 4.8514e9, RateUnit::Cyclic, std::nullopt, 50.0, "Sample 1");
}

QubitParams sample2()
{
    return QubitParams(2.046e6, 0.031e6, 4.8187e9, RateUnit::Cyclic, std::nullopt, 50.0, "Sample 2");
}

TransmonEnergies sample1_energies() { return {385e6, 8.9e9}; }
TransmonEnergies sample2_energies() { return {200e6, 15.7e9}; }

} // namespace wqload
