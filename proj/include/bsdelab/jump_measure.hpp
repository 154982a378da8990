#pragma once

#include <span>
#include <vector>

namespace bsdelab {

/// Finite mark space: m(dz) = sum_j lambda_j * delta_{z_j}(dz).
struct JumpMeasure {
    std::vector<double> marks;
    std::vector<double> intensities;

    int size() const { return static_cast<int>(marks.size()); }
    double total_mass() const;
};

JumpMeasure make_jump_measure(std::vector<double> marks, std::vector<double> intensities);

/// count_j - lambda_j * dt per mark; the increment of the compensated measure.
std::vector<double> compensated_increment(std::span<const double> counts,
                                          const JumpMeasure& jm, double dt);

}  // namespace bsdelab
