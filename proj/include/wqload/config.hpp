#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wqload/efficiency.hpp"
#include "wqload/field.hpp"
#include "wqload/params.hpp"
#include "wqload/waveform.hpp"

namespace wqload {

// Sections of an experiment file. Values are kept in the file's units
// (suffix of each key) so that a parsed file serialises back unchanged.

struct QubitSection
{
    std::string label;
    double gamma_r_mhz = 0.0;     // Gamma / 2pi
    double gamma_phi_mhz = 0.0;   // Gamma_phi / 2pi
    double omega_10_ghz = 0.0;    // omega_10 / 2pi
    std::optional<double> k_coupling_rad_s_sqrt_w;
    double z0_ohm = 50.0;
    std::optional<double> e_c_mhz;
    std::optional<double> e_j_ghz;

    bool operator==(const QubitSection&) const = default;
};

struct PulseSection
{
    std::string shape = "exp_rising";
    double tau_ns = 0.0;
    double t_start_us = 0.0;
    double t_off_us = 0.0;
    std::optional<double> peak_dbm;
    std::optional<double> target_n;
    std::optional<int> phase_m;
    std::optional<double> phase_theta_deg;

    bool operator==(const PulseSection&) const = default;
};

struct SimulationSection
{
    std::optional<double> dt_ns;
    std::optional<double> post_window_us;
    double detuning_mhz = 0.0;

    bool operator==(const SimulationSection&) const = default;
};

struct NoiseSection
{
    double v_n_nv = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> bin_ns;
    double gain_db = 0.0;

    bool operator==(const NoiseSection&) const = default;
};

/// parameter: tau (values in ns) | n | m | theta (degrees).
/// model: pipeline | analytic_coherent | fock (the last two for tau only).
struct SweepSection
{
    std::string parameter;
    std::vector<double> values;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<int> count;
    std::string spacing = "lin";
    std::string model = "pipeline";

    /// Explicit values, or `count` points from start to stop.
    std::vector<double> expand() const;

    bool operator==(const SweepSection&) const = default;
};

struct ExperimentConfig
{
    std::optional<QubitSection> qubit;
    std::optional<PulseSection> pulse;
    std::optional<SimulationSection> simulation;
    std::optional<NoiseSection> noise;
    std::optional<SweepSection> sweep;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses INI text. Errors are wqload::Error with module "config", code
/// "config-error" and the offending line number in the message.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a hash of the serialised form.
std::uint64_t config_hash(const ExperimentConfig& cfg);

QubitParams to_qubit(const QubitSection& q);
std::optional<TransmonEnergies> to_transmon(const QubitSection& q);
PulseSpec to_pulse(const PulseSection& s, const QubitParams& p);
NoiseModel to_noise(const NoiseSection& n);

/// Throws "config-error" naming the missing section.
Scenario to_scenario(const ExperimentConfig& cfg);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

} // namespace wqload
