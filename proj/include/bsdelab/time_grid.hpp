#pragma once

#include <vector>

namespace bsdelab {

/// Uniform time axis t_0 = 0 < ... < t_n = horizon.
struct TimeGrid {
    double horizon = 0.0;
    int steps = 0;
    double dt = 0.0;
    std::vector<double> times;

    double time(int i) const { return times[static_cast<std::size_t>(i)]; }
};

TimeGrid build_time_grid(double horizon, int steps);

}  // namespace bsdelab
