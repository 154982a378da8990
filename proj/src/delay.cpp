#include "bsdelab/delay.hpp"

#include <cmath>

#include "bsdelab/errors.hpp"

namespace bsdelab {

DelayMeasure make_delay_measure(std::vector<double> lags, std::vector<double> weights,
                                double horizon) {
    if (lags.empty() || lags.size() != weights.size()) {
        throw InvalidConfigError("delay measure: lags and weights must be nonempty and equal length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw InvalidConfigError("delay measure: weights must be nonnegative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidConfigError("delay measure: weights must sum to 1");
    }
    for (double l : lags) {
        if (!(l >= 0.0) || l > horizon + 1e-12) {
            throw InvalidConfigError("delay measure: lags must lie in [0, horizon]");
        }
    }
    DelayMeasure dm;
    dm.lags = std::move(lags);
    dm.weights = std::move(weights);
    return dm;
}

DelayMeasure no_delay() {
    DelayMeasure dm;
    dm.lags = {0.0};
    dm.weights = {1.0};
    return dm;
}

std::vector<int> lag_steps(const DelayMeasure& dm, const TimeGrid& grid) {
    std::vector<int> steps(dm.lags.size());
    for (std::size_t k = 0; k < dm.lags.size(); ++k) {
        const double ratio = dm.lags[k] / grid.dt;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
            throw InvalidConfigError("delay measure: lag is not a multiple of dt");
        }
        steps[k] = static_cast<int>(rounded);
    }
    return steps;
}

double DelayedArgument::weighted_y() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * y_past[k];
    return acc;
}

double DelayedArgument::weighted_z() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * z_past[k];
    return acc;
}

DelayedArgument segment_view(const SolutionTriple& series, int path, int t_index,
                             const DelayMeasure& dm, const std::vector<int>& steps) {
    const int q = dm.size();
    const int m = series.n_marks;
    DelayedArgument arg;
    arg.weights = dm.weights;
    arg.y_past.resize(static_cast<std::size_t>(q));
    arg.z_past.resize(static_cast<std::size_t>(q));
    arg.u_past.assign(static_cast<std::size_t>(q), std::vector<double>(static_cast<std::size_t>(m), 0.0));

    for (int k = 0; k < q; ++k) {
        const int j = t_index - steps[static_cast<std::size_t>(k)];
        if (j < 0) {
            arg.y_past[static_cast<std::size_t>(k)] = series.Y(path, 0);
            // z_past and u_past stay 0
        } else {
            arg.y_past[static_cast<std::size_t>(k)] = series.Y(path, j);
            if (j < series.n_steps) {
                arg.z_past[static_cast<std::size_t>(k)] = series.Z(path, j);
                for (int jm = 0; jm < m; ++jm) {
                    arg.u_past[static_cast<std::size_t>(k)][static_cast<std::size_t>(jm)] =
                        series.U(path, j, jm);
                }
            }
        }
    }
    return arg;
}

}  // namespace bsdelab
