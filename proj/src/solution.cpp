#include "bsdelab/solution.hpp"

#include <algorithm>
#include <cmath>

namespace bsdelab {

SolutionTriple SolutionTriple::zeros(int n_paths, int n_steps, int n_marks) {
    SolutionTriple s;
    s.n_paths = n_paths;
    s.n_steps = n_steps;
    s.n_marks = n_marks;
    s.Y = Field2D<double>(n_paths, n_steps + 1);
    s.Z = Field2D<double>(n_paths, n_steps);
    s.U = Field3D<double>(n_paths, n_steps, n_marks);
    s.y_se = Field2D<double>(n_paths, n_steps + 1);
    s.terminal_index.assign(static_cast<std::size_t>(n_paths), n_steps);
    return s;
}

double SolutionTriple::mean_y(int i) const {
    double acc = 0.0;
    for (int p = 0; p < n_paths; ++p) acc += Y(p, i);
    return acc / n_paths;
}

double SolutionTriple::mean_y_se(int i) const {
    double acc = 0.0;
    for (int p = 0; p < n_paths; ++p) acc += y_se(p, i);
    return acc / n_paths;
}

double mc_standard_error(const SolutionTriple& sol, int i) {
    const double mean = sol.mean_y(i);
    double var = 0.0;
    for (int p = 0; p < sol.n_paths; ++p) {
        const double d = sol.Y(p, i) - mean;
        var += d * d;
    }
    var /= std::max(1, sol.n_paths - 1);
    const double fit_se = sol.mean_y_se(i);
    return std::sqrt(var / sol.n_paths + fit_se * fit_se);
}

}  // namespace bsdelab
