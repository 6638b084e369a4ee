#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wqload {

using cplx = std::complex<double>;

/// Uniform time grid t_i = start + i * step, i = 0 .. size - 1.
struct TimeGrid
{
    double start = 0.0;
    double step = 0.0;
    std::size_t size = 0;

    double at(std::size_t i) const noexcept { return start + step * static_cast<double>(i); }
    double back() const noexcept { return at(size - 1); }
    std::size_t cells() const noexcept { return size > 0 ? size - 1 : 0; }

    /// Index of the node closest to t, clamped to the grid.
    std::size_t nearest(double t) const noexcept
    {
        const double x = std::round((t - start) / step);
        if (x <= 0.0)
            return 0;
        if (x >= static_cast<double>(size - 1))
            return size - 1;
        return static_cast<std::size_t>(x);
    }

    std::vector<double> times() const
    {
        std::vector<double> t(size);
        for (std::size_t i = 0; i < size; ++i)
            t[i] = at(i);
        return t;
    }
};

/// Grid with node spacing at most `max_step` that has a node exactly at
/// `anchor`, places nodes at every multiple of `period` away from the anchor,
/// and covers [begin, end].
TimeGrid aligned_grid(double anchor, double period, double max_step, double begin, double end);

/// Builds a TimeGrid from explicit sample times, throwing "grid-nonuniform"
/// (tagged with `module`) if the spacing is not constant.
TimeGrid grid_from_times(std::span<const double> t, const char* module);

/// Samples of a piecewise-smooth signal on a grid. Jumps are only allowed at
/// nodes: `value[i]` is the right limit f(t_i+), `left[i]` the left limit
/// f(t_i-), and `mid[i]` the value at the centre of cell [t_i, t_i+1].
/// `mid` may be empty, in which case consumers interpolate linearly.
template <class T>
struct PiecewiseSamples
{
    std::vector<T> value;
    std::vector<T> left;
    std::vector<T> mid;

    T cell_begin(std::size_t i) const { return value[i]; }
    T cell_end(std::size_t i) const { return left[i + 1]; }
    T cell_mid(std::size_t i) const
    {
        return mid.empty() ? T(0.5) * (value[i] + left[i + 1]) : mid[i];
    }
};

/// Trapezoid integral of g(f(t)) over nodes [i0, i1], using the right limit
/// at the start of each cell and the left limit at its end.
template <class T, class G>
double trapezoid(const TimeGrid& grid, const PiecewiseSamples<T>& f, std::size_t i0, std::size_t i1, G&& g)
{
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i)
        acc += g(f.cell_begin(i)) + g(f.cell_end(i));
    return 0.5 * grid.step * acc;
}

/// Simpson integral of g(f(t)) over nodes [i0, i1]; needs midpoint samples.
template <class T, class G>
double simpson(const TimeGrid& grid, const PiecewiseSamples<T>& f, std::size_t i0, std::size_t i1, G&& g)
{
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i)
        acc += g(f.cell_begin(i)) + 4.0 * g(f.cell_mid(i)) + g(f.cell_end(i));
    return grid.step * acc / 6.0;
}

} // namespace wqload
