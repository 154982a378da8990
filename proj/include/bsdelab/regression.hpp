#pragma once

#include <span>
#include <vector>

namespace bsdelab {

struct RegressionConfig {
    int basis_degree = 3;
    double ridge = 1e-8;
    int min_paths_per_fit = 32;
    // Hinge columns (k - x)+ at this many interior sample quantiles. A pure
    // polynomial cannot track the kink an obstacle leaves in the value
    // function near the terminal time; the one-sided reflection then turns
    // that misfit into an accumulating upward bias. Hinges restore local
    // resolution where the sample mass is.
    int hinge_knots = 8;
};

struct RegressionFit {
    std::vector<double> fitted;
    std::vector<double> se;  // per-point standard error of the fitted value
    double residual_std = 0.0;
};

/// Ridge-regularized least-squares projection of targets onto a polynomial
/// basis of the covariate augmented with quantile-knot hinges, evaluated back
/// at every sample point. The basis is centered and scaled internally; a
/// (near-)constant covariate collapses to an intercept-only fit.
RegressionFit regress_conditional(std::span<const double> targets,
                                  std::span<const double> state,
                                  const RegressionConfig& cfg);

}  // namespace bsdelab
