#include "bsdelab/time_grid.hpp"

#include "bsdelab/errors.hpp"

namespace bsdelab {

TimeGrid build_time_grid(double horizon, int steps) {
    if (!(horizon > 0.0)) {
        throw InvalidConfigError("time grid: horizon must be positive");
    }
    if (steps < 1) {
        throw InvalidConfigError("time grid: steps must be at least 1");
    }
    TimeGrid grid;
    grid.horizon = horizon;
    grid.steps = steps;
    grid.dt = horizon / steps;
    grid.times.resize(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        grid.times[static_cast<std::size_t>(i)] = horizon * i / steps;
    }
    grid.times.back() = horizon;
    return grid;
}

}  // namespace bsdelab
