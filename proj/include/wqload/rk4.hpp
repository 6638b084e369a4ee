#pragma once

#include <complex>

namespace wqload {

/// State of a driven two-level system: a complex coherence and a real
/// inversion. Used both for <sigma_->, <sigma_z> and for the single-photon
/// cross-coherence.
struct TwoLevelState
{
    std::complex<double> coherence{};
    double inversion = -1.0;

    TwoLevelState operator+(const TwoLevelState& o) const
    {
        return {coherence + o.coherence, inversion + o.inversion};
    }
    TwoLevelState operator*(double h) const { return {coherence * h, inversion * h}; }
};

/// One classical RK4 step of y' = f(drive, y) over a cell of width h, with
/// the drive supplied at the cell start, midpoint and end.
template <class Drive, class Rhs>
TwoLevelState rk4_step(const TwoLevelState& y, double h, const Drive& d0, const Drive& dm,
                       const Drive& d1, Rhs&& f)
{
    const TwoLevelState k1 = f(d0, y);
    const TwoLevelState k2 = f(dm, y + k1 * (0.5 * h));
    const TwoLevelState k3 = f(dm, y + k2 * (0.5 * h));
    const TwoLevelState k4 = f(d1, y + k3 * h);
    return y + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
}

} // namespace wqload
