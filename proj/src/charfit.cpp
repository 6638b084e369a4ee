#include "wqload/charfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>


namespace wqload {

cplx r_weak_probe(double delta, double gamma_r, double gamma)
{
    return 1.0 - gamma_r / cplx(gamma, delta);
}

double r_power(double p_in, double gamma_r, double gamma, double k)
{
    if (p_in < 0.0)
        throw Error("charfit", "invalid-power", "power must be >= 0");
    return 1.0 - gamma_r * gamma_r / (gamma_r * gamma + k * k * p_in);
}

double critical_power(double gamma_r, double gamma, double k)
{
    return gamma_r * (gamma_r - gamma) / (k * k);
}

bool FitResult::has_warning(const std::string& w) const
{
    return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

namespace {

struct Guess
{
    double gamma_r;
    double gamma;
    double omega_10;
};

// omega_10 at the largest |1 - r|, gamma from the half width of |1 - r|^2,
// Gamma from the depth 1 - Re r at resonance.
Guess initial_guess(std::span<const SpectrumSample> s)
{
    std::vector<SpectrumSample> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.omega_p < b.omega_p; });
    std::vector<double> d(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        d[i] = std::norm(1.0 - sorted[i].r);
    const auto peak = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
    const double half = 0.5 * d[peak];

    auto crossing = [&](std::size_t a, std::size_t b) {
        const double t = (d[a] - half) / (d[a] - d[b]);
        return sorted[a].omega_p + t * (sorted[b].omega_p - sorted[a].omega_p);
    };
    double lo = sorted.front().omega_p, hi = sorted.back().omega_p;
    for (std::size_t i = peak; i > 0; --i)
        if (d[i - 1] < half) {
            lo = crossing(i, i - 1);
            break;
        }
    for (std::size_t i = peak; i + 1 < sorted.size(); ++i)
        if (d[i + 1] < half) {
            hi = crossing(i, i + 1);
            break;
        }
    Guess g;
    g.omega_10 = sorted[peak].omega_p;
    g.gamma = std::max(0.5 * (hi - lo), 1e-12 * std::abs(g.omega_10));
    g.gamma_r = std::max(0.0, g.gamma * (1.0 - sorted[peak].r.real()));
    return g;
}

} // namespace

FitResult fit_spectrum(std::span<const SpectrumSample> samples, const SpectrumFitOptions& opt)
{
    if (samples.size() < 8)
        throw Error("charfit", "insufficient-data", "need at least 8 frequency points");
    double depth = 0.0;
    for (const auto& s : samples)
        depth = std::max(depth, std::abs(1.0 - s.r));
    if (!(depth > 1e-12)) {
        // A bare mirror: every Gamma = 0 model fits and gamma, omega_10 are undefined.
        FitResult flat;
        flat.gamma = flat.omega_10 = std::numeric_limits<double>::quiet_NaN();
        flat.se_gamma_r = flat.se_gamma = flat.se_omega_10 = std::numeric_limits<double>::quiet_NaN();
        flat.residual_norm = depth * std::sqrt(static_cast<double>(samples.size()));
        flat.warnings.push_back("vanishing-coupling");
        throw FitDiverged("reflection shows no resonance", flat);
    }
    const Guess g0 = initial_guess(samples);
    const auto [wmin, wmax] = std::minmax_element(samples.begin(), samples.end(),
                                                  [](auto& a, auto& b) { return a.omega_p < b.omega_p; });
    if (!(g0.omega_10 > wmin->omega_p && g0.omega_10 < wmax->omega_p))
        throw Error("charfit", "insufficient-data", "resonance is not inside the scanned range");

    // Work in units of the guessed linewidth around the guessed resonance.
    const double scale = g0.gamma;
    const double w_ref = g0.omega_10;
    const auto n = static_cast<Eigen::Index>(samples.size());

    auto residuals = [&](const Eigen::Vector3d& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        r.resize(2 * n);
        if (jac)
            jac->resize(2 * n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& s = samples[static_cast<std::size_t>(i)];
            const double delta = (w_ref - s.omega_p) / scale + x[2];
            const cplx den(x[1], delta);
            const cplx diff = 1.0 - x[0] / den - s.r;
            r[2 * i] = diff.real();
            r[2 * i + 1] = diff.imag();
            if (jac) {
                const cplx d0 = -1.0 / den;
                const cplx d1 = x[0] / (den * den);
                const cplx d2 = cplx(0.0, 1.0) * x[0] / (den * den);
                (*jac)(2 * i, 0) = d0.real();
                (*jac)(2 * i + 1, 0) = d0.imag();
                (*jac)(2 * i, 1) = d1.real();
                (*jac)(2 * i + 1, 1) = d1.imag();
                (*jac)(2 * i, 2) = d2.real();
                (*jac)(2 * i + 1, 2) = d2.imag();
            }
        }
    };

    Eigen::Vector3d x(g0.gamma_r / scale, 1.0, 0.0);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    residuals(x, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    double grad = 0.0;
    for (; iter < opt.max_iterations; ++iter) {
        const Eigen::Vector3d gvec = jac.transpose() * r;
        grad = gvec.lpNorm<Eigen::Infinity>();
        if (grad < 1e-10) {
            converged = true;
            break;
        }
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        bool improved = false;
        while (lambda < 1e16) {
            Eigen::Matrix3d a = jtj;
            for (int k = 0; k < 3; ++k)
                a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
            const Eigen::Vector3d step = a.ldlt().solve(-gvec);
            Eigen::Vector3d trial = x + step;
            trial[1] = std::max(trial[1], 1e-12);
            trial[0] = std::max(trial[0], 0.0);
            Eigen::VectorXd rt;
            residuals(trial, rt, nullptr);
            const double ct = rt.squaredNorm();
            if (ct < cost) {
                const double rel_step = step.norm() / (x.norm() + 1e-30);
                x = trial;
                cost = ct;
                residuals(x, r, &jac);
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                if (rel_step < 1e-15)
                    lambda = 1e16;  // no further progress possible
                break;
            }
            lambda *= 4.0;
        }
        if (!improved || lambda >= 1e16) {
            const Eigen::Vector3d gfinal = jac.transpose() * r;
            grad = gfinal.lpNorm<Eigen::Infinity>();
            converged = grad < 1e-10 || (grad < 1e-7 * (1.0 + std::sqrt(cost)));
            break;
        }
    }

    FitResult fit;
    fit.gamma_r = x[0] * scale;
    fit.gamma = x[1] * scale;
    fit.omega_10 = w_ref + x[2] * scale;
    fit.residual_norm = std::sqrt(cost);
    fit.gradient_norm = grad;
    fit.iterations = iter;

    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
    if (lu.isInvertible() && 2 * n > 3) {
        const Eigen::Matrix3d cov = lu.inverse() * (cost / static_cast<double>(2 * n - 3));
        fit.se_gamma_r = std::sqrt(std::max(cov(0, 0), 0.0)) * scale;
        fit.se_gamma = std::sqrt(std::max(cov(1, 1), 0.0)) * scale;
        fit.se_omega_10 = std::sqrt(std::max(cov(2, 2), 0.0)) * scale;
    } else {
        fit.se_gamma_r = fit.se_gamma = fit.se_omega_10 = std::numeric_limits<double>::quiet_NaN();
    }

    if (fit.gamma_r < 1e-6 * fit.gamma)
        fit.warnings.push_back("vanishing-coupling");
    else if (fit.gamma < 0.5 * fit.gamma_r)
        fit.warnings.push_back("nonphysical-dephasing");
    if (opt.probe_rabi && *opt.probe_rabi > fit.gamma / 10.0)
        fit.warnings.push_back("probe-not-weak");
    if (!converged)
        throw FitDiverged("no convergence after " + std::to_string(iter) + " iterations", fit);
    return fit;
}

PowerFit fit_power_scan(std::span<const PowerSample> samples, double gamma_r, double gamma)
{
    if (samples.size() < 5)
        throw Error("charfit", "power-range-insufficient", "need at least 5 powers");
    if (!(gamma < gamma_r))
        throw Error("charfit", "power-range-insufficient", "|r| has no interior minimum when gamma >= Gamma");
    std::vector<PowerSample> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end(), [](auto& a, auto& b) { return a.p_in < b.p_in; });
    const auto imin = static_cast<std::size_t>(
        std::min_element(s.begin(), s.end(), [](auto& a, auto& b) { return a.abs_r < b.abs_r; }) - s.begin());
    if (imin == 0 || imin + 1 == s.size() || !(s[imin].p_in > 0.0))
        throw Error("charfit", "power-range-insufficient", "the |r| minimum is not bracketed");

    const double k0 = std::sqrt(gamma_r * (gamma_r - gamma) / s[imin].p_in);
    const double g2 = gamma_r * gamma_r;
    auto eval = [&](double u, double& cost, double& jtj, double& jtr) {
        cost = jtj = jtr = 0.0;
        const double k = u * k0;
        for (const auto& x : s) {
            const double den = gamma_r * gamma + k * k * x.p_in;
            const double model = 1.0 - g2 / den;
            const double res = std::abs(model) - x.abs_r;
            const double dk = (model < 0.0 ? -1.0 : 1.0) * g2 * 2.0 * k * x.p_in / (den * den) * k0;
            cost += res * res;
            jtj += dk * dk;
            jtr += dk * res;
        }
    };

    double u = 1.0, cost, jtj, jtr, lambda = 1e-3;
    eval(u, cost, jtj, jtr);
    for (int iter = 0; iter < 200 && std::abs(jtr) > 1e-15 * (1.0 + jtj); ++iter) {
        bool improved = false;
        while (lambda < 1e16) {
            const double trial = std::max(u - jtr / (jtj * (1.0 + lambda)), 1e-6);
            double ct, jj, jr;
            eval(trial, ct, jj, jr);
            if (ct < cost) {
                const bool tiny = std::abs(trial - u) < 1e-15 * u;
                u = trial;
                cost = ct;
                jtj = jj;
                jtr = jr;
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = !tiny;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved)
            break;
    }
    const double dof = static_cast<double>(s.size() - 1);
    const double se = jtj > 0.0 ? std::sqrt(cost / dof / jtj) * k0 : std::numeric_limits<double>::quiet_NaN();
    return {u * k0, se, std::sqrt(cost)};
}

std::vector<SpectrumSample> synthesize_spectrum(const QubitParams& p, std::span<const double> omega_p,
                                                double sigma, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma > 0.0 ? sigma : 1.0);
    const double gamma = decoherence_rate(p);
    std::vector<SpectrumSample> out;
    out.reserve(omega_p.size());
    for (double w : omega_p) {
        cplx r = r_weak_probe(p.omega_10() - w, p.gamma_r(), gamma);
        if (sigma > 0.0)
            r += cplx(normal(rng), normal(rng));
        out.push_back({w, r});
    }
    return out;
}

std::vector<PowerSample> synthesize_power_scan(const QubitParams& p, std::span<const double> powers,
                                               double sigma, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma > 0.0 ? sigma : 1.0);
    const double gamma = decoherence_rate(p);
    std::vector<PowerSample> out;
    out.reserve(powers.size());
    for (double pw : powers) {
        double a = std::abs(r_power(pw, p.gamma_r(), gamma, p.k_coupling()));
        if (sigma > 0.0)
            a += normal(rng);
        out.push_back({pw, a});
    }
    return out;
}

} // namespace wqload
