#include "wqload/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "wqload/config.hpp"
#include "wqload/error.hpp"

namespace wqload {

namespace {

std::string num(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void stamp_line(std::ostream& os, const CsvStamp& s)
{
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s.config_hash));
    os << "# wqload config_hash=" << hash << " seed=" << s.seed << '\n';
}

// Numeric rows of a CSV; comment lines and non-numeric rows (headers) are skipped.
std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t columns)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::vector<double> row;
        bool numeric = true;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            auto comma = line.find(',', pos);
            if (comma == std::string::npos)
                comma = line.size();
            std::string cell = line.substr(pos, comma - pos);
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
                numeric = false;
            row.push_back(v);
            pos = comma + 1;
        }
        if (!numeric) {
            if (rows.empty())
                continue;
            throw Error("io", "csv-error", "line " + std::to_string(line_no) + ": non-numeric value");
        }
        if (row.size() != columns)
            throw Error("io", "csv-error",
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_trace_csv(std::ostream& os, const FieldTrace& ft, const CsvStamp& stamp)
{
    stamp_line(os, stamp);
    const bool volts = ft.v_on && ft.v_off;
    os << "t_ns,re_alpha_in,im_alpha_in,re_alpha_out,im_alpha_out,f_in,f_out,s_z,re_s_minus,im_s_minus";
    if (volts)
        os << ",re_v_on,im_v_on,re_v_off,im_v_off";
    os << '\n';
    for (std::size_t i = 0; i < ft.grid.size; ++i) {
        const double t = ft.grid.at(i);
        const cplx ai = ft.alpha_in.value[i];
        const cplx ao = ft.alpha_out.value[i];
        os << num(t * 1e9) << ',' << num(ai.real()) << ',' << num(ai.imag()) << ',' << num(ao.real()) << ','
           << num(ao.imag()) << ',' << num(ft.f_in[i]) << ',' << num(ft.f_out[i]) << ',' << num(ft.s_z[i]) << ','
           << num(ft.s_minus[i].real()) << ',' << num(ft.s_minus[i].imag());
        if (volts) {
            const cplx von = ft.v_on->v.value[ft.v_on->grid.nearest(t)];
            const cplx voff = ft.v_off->v.value[ft.v_off->grid.nearest(t)];
            os << ',' << num(von.real()) << ',' << num(von.imag()) << ',' << num(voff.real()) << ','
               << num(voff.imag());
        }
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::string& parameter, std::span<const SweepPoint> points,
                     const CsvStamp& stamp)
{
    stamp_line(os, stamp);
    os << "sweep_param_name,sweep_value,eta,e_on,e_off,t_i_us,t0_us,t_f_us,method\n";
    for (const auto& pt : points) {
        const auto& r = pt.result;
        os << parameter << ',' << num(pt.value) << ',' << num(r.eta) << ',' << num(r.e_on) << ','
           << num(r.e_off) << ',' << num(r.windows.t_i * 1e6) << ',' << num(r.windows.t0 * 1e6) << ','
           << num(r.windows.t_f * 1e6) << ',' << to_string(r.method) << '\n';
    }
}

void write_fock_csv(std::ostream& os, const FockTrajectory& traj, const QubitParams& p, const CsvStamp& stamp)
{
    stamp_line(os, stamp);
    const auto f_in = fock_input_flux(traj);
    const auto f_out = fock_output_flux(traj, p);
    os << "t_ns,re_xi,im_xi,f_in,f_out,s_z,p_e,re_c,im_c\n";
    for (std::size_t i = 0; i < traj.grid.size; ++i) {
        const cplx xi = traj.xi.value[i];
        os << num(traj.grid.at(i) * 1e9) << ',' << num(xi.real()) << ',' << num(xi.imag()) << ','
           << num(f_in.value[i]) << ',' << num(f_out.value[i]) << ',' << num(traj.s_z[i]) << ','
           << num(traj.p_e[i]) << ',' << num(traj.c[i].real()) << ',' << num(traj.c[i].imag()) << '\n';
    }
}

std::vector<SpectrumSample> read_spectrum_csv(std::istream& is)
{
    std::vector<SpectrumSample> out;
    for (const auto& row : read_rows(is, 3))
        out.push_back({kTwoPi * row[0] * 1e9, cplx(row[1], row[2])});
    return out;
}

std::vector<PowerSample> read_power_csv(std::istream& is)
{
    std::vector<PowerSample> out;
    for (const auto& row : read_rows(is, 2))
        out.push_back({dbm_to_watts(row[0]), row[1]});
    return out;
}

void write_fit_result(std::ostream& os, const FitResult& fit)
{
    os << "gamma_r_mhz = " << num(fit.gamma_r / kTwoPi * 1e-6) << '\n'
       << "gamma_mhz = " << num(fit.gamma / kTwoPi * 1e-6) << '\n'
       << "gamma_phi_mhz = " << num((fit.gamma - fit.gamma_r / 2.0) / kTwoPi * 1e-6) << '\n'
       << "omega_10_ghz = " << num(fit.omega_10 / kTwoPi * 1e-9) << '\n'
       << "se_gamma_r_mhz = " << num(fit.se_gamma_r / kTwoPi * 1e-6) << '\n'
       << "se_gamma_mhz = " << num(fit.se_gamma / kTwoPi * 1e-6) << '\n'
       << "se_omega_10_ghz = " << num(fit.se_omega_10 / kTwoPi * 1e-9) << '\n';
    if (fit.k_coupling)
        os << "k_coupling_rad_s_sqrt_w = " << num(*fit.k_coupling) << '\n';
    os << "residual_norm = " << num(fit.residual_norm) << '\n'
       << "gradient_norm = " << num(fit.gradient_norm) << '\n'
       << "iterations = " << fit.iterations << '\n';
    std::string warnings;
    for (std::size_t i = 0; i < fit.warnings.size(); ++i)
        warnings += (i ? "," : "") + fit.warnings[i];
    os << "warnings = " << warnings << '\n';
}

} // namespace wqload
