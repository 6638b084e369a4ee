#include "wqload/grid.hpp"

#include <algorithm>

#include "wqload/error.hpp"

namespace wqload {

TimeGrid aligned_grid(double anchor, double period, double max_step, double begin, double end)
{
    if (!(max_step > 0.0) || !(period > 0.0) || !(end > begin))
        throw Error("grid", "invalid-grid", "need max_step > 0, period > 0, end > begin");
    const double per_period = std::ceil(period / max_step * (1.0 - 1e-12));
    const double step = period / std::max(per_period, 1.0);
    const double before = std::max(0.0, std::ceil((anchor - begin) / step - 1e-9));
    const double after = std::max(0.0, std::ceil((end - anchor) / step - 1e-9));
    TimeGrid g;
    g.start = anchor - before * step;
    g.step = step;
    g.size = static_cast<std::size_t>(before + after) + 1;
    return g;
}

TimeGrid grid_from_times(std::span<const double> t, const char* module)
{
    if (t.size() < 2)
        throw Error(module, "grid-nonuniform", "need at least two samples");
    const double step = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(step > 0.0))
        throw Error(module, "grid-nonuniform", "times must be strictly increasing");
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double d = t[i] - t[i - 1];
        if (std::abs(d - step) > 1e-6 * step)
            throw Error(module, "grid-nonuniform", "sample spacing varies");
    }
    return {t.front(), step, t.size()};
}

} // namespace wqload
