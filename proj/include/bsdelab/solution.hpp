#pragma once

#include <vector>

#include "bsdelab/field.hpp"

namespace bsdelab {

/// Discrete (Y, Z, U) fields. Y lives on grid nodes, Z and U on intervals.
/// y_se carries the per-path standard error of the continuation fit, used by
/// the statistical tolerances downstream.
struct SolutionTriple {
    int n_paths = 0;
    int n_steps = 0;
    int n_marks = 0;
    Field2D<double> Y;     // P x (n+1)
    Field2D<double> Z;     // P x n
    Field3D<double> U;     // P x n x m
    Field2D<double> y_se;  // P x (n+1)
    std::vector<int> terminal_index;

    static SolutionTriple zeros(int n_paths, int n_steps, int n_marks);

    double mean_y(int i) const;
    double mean_y_se(int i) const;
};

/// Standard error of mean_y(i): cross-sectional spread plus the fit noise.
double mc_standard_error(const SolutionTriple& sol, int i);

}  // namespace bsdelab
