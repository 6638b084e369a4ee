#pragma once

#include <numbers>
#include <optional>
#include <string>

namespace wqload {

inline constexpr double kHbar = 1.054571817e-34;  // J s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// How rate and frequency arguments are expressed. Table-style device data
/// is usually quoted as f = omega / 2pi; everything is stored as angular.
enum class RateUnit { Angular, Cyclic };

/// Device parameters of a two-level emitter at a waveguide antinode.
/// Immutable once constructed; the constructor rejects nonphysical values.
class QubitParams
{
public:
    /// `gamma_r`, `gamma_phi` and `omega_10` are interpreted according to
    /// `unit`. When `k_coupling` is absent it is derived from the rates as
    /// k = 2 sqrt(Gamma / (hbar omega_10)), which makes Omega = k sqrt(P)
    /// and Omega = 2 sqrt(Gamma) alpha agree.
    QubitParams(double gamma_r, double gamma_phi, double omega_10, RateUnit unit,
                std::optional<double> k_coupling = std::nullopt, double z0 = 50.0,
                std::string label = {});

    double gamma_r() const noexcept { return gamma_r_; }
    double gamma_phi() const noexcept { return gamma_phi_; }
    double omega_10() const noexcept { return omega_10_; }
    double k_coupling() const noexcept { return k_coupling_; }
    bool k_is_derived() const noexcept { return k_derived_; }
    double z0() const noexcept { return z0_; }
    const std::string& label() const noexcept { return label_; }

    /// Copy with a different pure dephasing rate (angular). A derived k stays
    /// derived; an explicit k is kept.
    QubitParams with_gamma_phi(double gamma_phi) const;

private:
    double gamma_r_;
    double gamma_phi_;
    double omega_10_;
    double k_coupling_;
    bool k_derived_;
    double z0_;
    std::string label_;
};

struct TransmonEnergies
{
    double e_c;  // E_C / h, Hz
    double e_j;  // E_J / h, Hz

    TransmonEnergies(double e_c_hz, double e_j_hz);
};

/// gamma = Gamma / 2 + Gamma_phi.
double decoherence_rate(const QubitParams& p);

struct CoherenceTimes
{
    double t1;
    double t2;
};

/// T1 = 1 / Gamma, T2 = 1 / gamma (angular rates).
CoherenceTimes coherence_times(const QubitParams& p);

/// omega_10 / 2pi ~ sqrt(8 E_J E_C) - E_C, in Hz.
double transmon_frequency(const TransmonEnergies& e);

double derived_coupling(double gamma_r, double omega_10);

/// Table values for the two measured devices.
QubitParams sample1();
QubitParams sample2();
TransmonEnergies sample1_energies();
TransmonEnergies sample2_energies();

/// Pulse turn-off times used for the time-domain measurements of each device.
inline constexpr double kSample1TurnOff = 2.635e-6;
inline constexpr double kSample2TurnOff = 0.825e-6;

} // namespace wqload
