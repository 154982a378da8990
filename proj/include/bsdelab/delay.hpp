#pragma once

#include <vector>

#include "bsdelab/solution.hpp"
#include "bsdelab/time_grid.hpp"

namespace bsdelab {

/// Probability measure alpha on past offsets: finite point masses at
/// grid-aligned lags.
struct DelayMeasure {
    std::vector<double> lags;     // nonnegative offsets in [0, horizon]
    std::vector<double> weights;  // sums to 1

    int size() const { return static_cast<int>(lags.size()); }
};

DelayMeasure make_delay_measure(std::vector<double> lags, std::vector<double> weights,
                                double horizon);

/// Zero-lag point mass (the no-delay degeneracy).
DelayMeasure no_delay();

/// Lag offsets as grid-step counts; throws if a lag is not a multiple of dt.
std::vector<int> lag_steps(const DelayMeasure& dm, const TimeGrid& grid);

/// Past-segment samples read by a delayed generator at one (path, time).
struct DelayedArgument {
    std::vector<double> weights;
    std::vector<double> y_past;
    std::vector<double> z_past;
    std::vector<std::vector<double>> u_past;  // lag x mark

    double weighted_y() const;
    double weighted_z() const;
};

/// Samples the frozen iterate at t_i - lag_k. Times below zero follow the
/// extension convention: Y frozen at Y(0), Z and U zeroed.
DelayedArgument segment_view(const SolutionTriple& series, int path, int t_index,
                             const DelayMeasure& dm, const std::vector<int>& steps);

}  // namespace bsdelab
