#pragma once

#include <cstdint>
#include <vector>

#include "bsdelab/field.hpp"
#include "bsdelab/jump_measure.hpp"
#include "bsdelab/time_grid.hpp"

namespace bsdelab {

enum class Dynamics { Geometric, Arithmetic };

/// One-dimensional Markovian forward state used as regression covariate.
struct ForwardModelSpec {
    double initial = 1.0;
    double drift = 0.0;
    double volatility = 0.0;
    std::vector<double> jump_loadings;  // one per mark, may be empty when no marks
    Dynamics dynamics = Dynamics::Geometric;
};

void validate_forward_model(const ForwardModelSpec& model, const JumpMeasure& jm);

/// Simulated driving noise plus the forward state, immutable after construction.
struct PathBundle {
    int n_paths = 0;
    TimeGrid grid;
    JumpMeasure jump_measure;
    Field2D<double> dW;           // P x n
    Field3D<double> jump_counts;  // P x n x m
    Field2D<double> state;        // P x (n+1)
    std::uint64_t seed = 0;

    int steps() const { return grid.steps; }
    int marks() const { return jump_measure.size(); }
};

/// Deterministic given (model, grid, jm, seed); path p draws from its own
/// substream so the bundle is identical regardless of evaluation order.
PathBundle simulate_paths(const ForwardModelSpec& model, const TimeGrid& grid,
                          const JumpMeasure& jm, int n_paths, std::uint64_t seed);

}  // namespace bsdelab
