#include "wqload/field.hpp"

#include <cmath>
#include <random>

#include "wqload/error.hpp"

namespace wqload {

void NoiseModel::validate() const
{
    if (!(v_n >= 0.0))
        throw Error("field", "invalid-noise", "v_n must be >= 0");
    if (bin && !(*bin > 0.0))
        throw Error("field", "invalid-noise", "bin width must be > 0");
    if (!std::isfinite(gain_db))
        throw Error("field", "invalid-noise", "gain must be finite");
}

double NoiseModel::gain() const { return std::pow(10.0, gain_db / 20.0); }

double NoiseModel::floor_power() const
{
    const double g = gain();
    return 2.0 * v_n * v_n * g * g;
}

double rabi_from_power(double p_in, double k)
{
    if (p_in < 0.0)
        throw Error("field", "invalid-power", "power must be >= 0");
    return k * std::sqrt(p_in);
}

double power_from_rabi(double omega, double k)
{
    const double x = omega / k;
    return x * x;
}

cplx alpha_from_rabi(cplx omega, const QubitParams& p)
{
    return omega / (2.0 * std::sqrt(p.gamma_r()));
}

cplx rabi_from_alpha(cplx alpha, const QubitParams& p)
{
    return 2.0 * std::sqrt(p.gamma_r()) * alpha;
}

double volts_per_amplitude(const QubitParams& p)
{
    return std::sqrt(2.0 * p.z0() * kHbar * p.omega_10());
}

namespace {

PiecewiseSamples<cplx> input_amplitude(const DriveTrace& drive, const QubitParams& p)
{
    const double scale = 1.0 / (2.0 * std::sqrt(p.gamma_r()));
    PiecewiseSamples<cplx> a;
    auto conv = [&](const std::vector<cplx>& w) {
        std::vector<cplx> out(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            out[i] = w[i] * scale;
        return out;
    };
    a.value = conv(drive.omega.value);
    a.left = conv(drive.omega.left);
    a.mid = conv(drive.omega.mid);
    return a;
}

void fill_flux(FieldTrace& ft)
{
    ft.f_in.resize(ft.grid.size);
    ft.f_out.resize(ft.grid.size);
    for (std::size_t i = 0; i < ft.grid.size; ++i) {
        ft.f_in[i] = std::norm(ft.alpha_in.value[i]);
        ft.f_out[i] = std::norm(ft.alpha_out.value[i]);
    }
}

VoltageTrace to_voltage(const TimeGrid& grid, const PiecewiseSamples<cplx>& alpha, double scale)
{
    VoltageTrace vt;
    vt.grid = grid;
    vt.v.value.resize(grid.size);
    vt.v.left.resize(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) {
        vt.v.value[i] = scale * alpha.value[i];
        vt.v.left[i] = scale * alpha.left[i];
    }
    return vt;
}

// Boxcar average of the right-limit samples onto bins of the given width;
// the binned samples sit at bin centres.
VoltageTrace bin_trace(const VoltageTrace& in, double bin)
{
    const double span = in.grid.back() - in.grid.start;
    const auto nbins = static_cast<std::size_t>(std::floor(span / bin + 1e-9));
    if (nbins == 0)
        throw Error("field", "invalid-noise", "bin width exceeds the trace length");
    VoltageTrace out;
    out.grid = {in.grid.start + 0.5 * bin, bin, nbins};
    out.v.value.assign(nbins, 0.0);
    std::vector<std::size_t> count(nbins, 0);
    for (std::size_t i = 0; i < in.grid.size; ++i) {
        const auto b = static_cast<std::size_t>(std::floor((in.grid.at(i) - in.grid.start) / bin));
        if (b >= nbins)
            continue;
        out.v.value[b] += in.v.value[i];
        ++count[b];
    }
    for (std::size_t b = 0; b < nbins; ++b)
        if (count[b] > 0)
            out.v.value[b] /= static_cast<double>(count[b]);
    out.v.left = out.v.value;
    return out;
}

void add_noise(VoltageTrace& vt, double sigma, std::mt19937_64& rng)
{
    if (sigma == 0.0)
        return;
    std::normal_distribution<double> normal(0.0, sigma);
    for (std::size_t i = 0; i < vt.grid.size; ++i) {
        const cplx n(normal(rng), normal(rng));
        vt.v.value[i] += n;
        vt.v.left[i] += n;
    }
}

void scale_trace(VoltageTrace& vt, double g)
{
    for (auto& x : vt.v.value)
        x *= g;
    for (auto& x : vt.v.left)
        x *= g;
}

} // namespace

FieldTrace output_field(const DriveTrace& drive, const Trajectory& traj, const QubitParams& p)
{
    const TimeGrid& g = drive.grid;
    if (traj.grid.size != g.size || traj.grid.step != g.step || traj.grid.start != g.start)
        throw Error("field", "grid-mismatch", "drive and trajectory grids differ");

    FieldTrace ft;
    ft.grid = g;
    ft.alpha_in = input_amplitude(drive, p);
    const double rg = std::sqrt(p.gamma_r());
    ft.alpha_out.value.resize(g.size);
    ft.alpha_out.left.resize(g.size);
    for (std::size_t i = 0; i < g.size; ++i) {
        const cplx emitted = rg * traj.s_minus[i];
        ft.alpha_out.value[i] = ft.alpha_in.value[i] + emitted;
        ft.alpha_out.left[i] = ft.alpha_in.left[i] + emitted;
    }
    ft.s_minus = traj.s_minus;
    ft.s_z = traj.s_z;
    fill_flux(ft);
    return ft;
}

FieldTrace bypass_field(const DriveTrace& drive, const QubitParams& p)
{
    FieldTrace ft;
    ft.grid = drive.grid;
    ft.alpha_in = input_amplitude(drive, p);
    ft.alpha_out = ft.alpha_in;
    ft.s_minus.assign(ft.grid.size, 0.0);
    ft.s_z.assign(ft.grid.size, -1.0);
    fill_flux(ft);
    return ft;
}

FieldTrace synthesize_voltages(FieldTrace ft, const QubitParams& p, const NoiseModel& noise)
{
    noise.validate();
    const double scale = volts_per_amplitude(p);
    VoltageTrace on = to_voltage(ft.grid, ft.alpha_out, scale);
    VoltageTrace off = to_voltage(ft.grid, ft.alpha_in, scale);
    if (noise.bin) {
        on = bin_trace(on, *noise.bin);
        off = bin_trace(off, *noise.bin);
    }
    std::mt19937_64 rng(noise.seed);
    add_noise(off, noise.v_n, rng);
    add_noise(on, noise.v_n, rng);
    scale_trace(on, noise.gain());
    scale_trace(off, noise.gain());
    ft.v_on = std::move(on);
    ft.v_off = std::move(off);
    return ft;
}

} // namespace wqload
