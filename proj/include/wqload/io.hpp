#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wqload/charfit.hpp"
#include "wqload/efficiency.hpp"
#include "wqload/field.hpp"
#include "wqload/fock.hpp"

namespace wqload {

/// Provenance line written at the top of every CSV.
struct CsvStamp
{
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

/// Field trace on the simulation grid. Voltages on a coarser digitizer grid
/// are held at their nearest sample.
void write_trace_csv(std::ostream& os, const FieldTrace& ft, const CsvStamp& stamp);

void write_sweep_csv(std::ostream& os, const std::string& parameter, std::span<const SweepPoint> points,
                     const CsvStamp& stamp);

/// Fock trace: t_ns, re_xi, im_xi, f_in, f_out, s_z, p_e, re_c, im_c.
void write_fock_csv(std::ostream& os, const FockTrajectory& traj, const QubitParams& p, const CsvStamp& stamp);

/// omega_ghz, re_r, im_r. Comment lines and a header row are skipped.
std::vector<SpectrumSample> read_spectrum_csv(std::istream& is);
/// p_dbm, abs_r.
std::vector<PowerSample> read_power_csv(std::istream& is);

void write_fit_result(std::ostream& os, const FitResult& fit);

} // namespace wqload
