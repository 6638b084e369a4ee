#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wqload/error.hpp"
#include "wqload/grid.hpp"
#include "wqload/params.hpp"

namespace wqload {

struct SpectrumSample
{
    double omega_p;  // rad/s
    cplx r;
};

struct PowerSample
{
    double p_in;     // W
    double abs_r;
};

/// Weak-probe reflection r = 1 - Gamma / (gamma + i delta), delta = omega_10 - omega_p.
cplx r_weak_probe(double delta, double gamma_r, double gamma);

/// Resonant reflection at input power p_in: 1 - Gamma^2 / (Gamma gamma + Omega_p^2),
/// Omega_p = k sqrt(p_in).
double r_power(double p_in, double gamma_r, double gamma, double k);

struct FitResult
{
    double gamma_r = 0.0;
    double gamma = 0.0;
    double omega_10 = 0.0;
    std::optional<double> k_coupling;
    double se_gamma_r = 0.0;
    double se_gamma = 0.0;
    double se_omega_10 = 0.0;
    double residual_norm = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    std::vector<std::string> warnings;  // "nonphysical-dephasing", "vanishing-coupling", "probe-not-weak"

    bool has_warning(const std::string& w) const;
};

/// Raised when the optimiser does not converge; carries the best point found.
class FitDiverged : public Error
{
public:
    FitDiverged(const std::string& detail, FitResult best)
        : Error("charfit", "fit-diverged", detail), best_(std::move(best))
    {}
    const FitResult& best() const noexcept { return best_; }

private:
    FitResult best_;
};

struct SpectrumFitOptions
{
    std::optional<double> probe_rabi;  // declared probe Rabi frequency, rad/s
    int max_iterations = 200;
};

/// Levenberg-Marquardt fit of the weak-probe model to complex reflection
/// data, jointly over (Gamma, gamma, omega_10). Needs >= 8 points with the
/// resonance inside the scanned range ("insufficient-data").
FitResult fit_spectrum(std::span<const SpectrumSample> samples, const SpectrumFitOptions& opt = {});

struct PowerFit
{
    double k;
    double se_k;
    double residual_norm;
};

/// One-parameter least squares for k on |r| versus resonant power with Gamma
/// and gamma known. Throws "power-range-insufficient" unless the |r|
/// minimum is bracketed by at least five points.
PowerFit fit_power_scan(std::span<const PowerSample> samples, double gamma_r, double gamma);

/// Input power where |r_power| vanishes, Gamma (Gamma - gamma) / k^2.
double critical_power(double gamma_r, double gamma, double k);

/// Model data with complex Gaussian noise of per-quadrature std `sigma`.
std::vector<SpectrumSample> synthesize_spectrum(const QubitParams& p, std::span<const double> omega_p,
                                                double sigma = 0.0, std::uint64_t seed = 0);
std::vector<PowerSample> synthesize_power_scan(const QubitParams& p, std::span<const double> powers,
                                               double sigma = 0.0, std::uint64_t seed = 0);

} // namespace wqload
