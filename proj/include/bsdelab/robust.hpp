#pragma once

#include <string>
#include <vector>

#include "bsdelab/stopping.hpp"

namespace bsdelab {

/// Finite generator family {f^delta}: one GeneratorSpec template whose
/// coefficient runs over the deltas.
struct AmbiguitySet {
    GeneratorKind family_kind = GeneratorKind::Zero;
    std::vector<double> deltas;
    bool contains_min = true;  // some delta realizes the pointwise minimum

    GeneratorSpec instantiate(double delta) const;
};

/// Pointwise minimum over the family; lipschitz_K is the family maximum.
Driver min_generator(const AmbiguitySet& amb);

/// Per-path largest initial segment on which solution differences stay inside
/// the band [1/n_band, n_band], realized as the first exit index.
struct ComparisonRegion {
    std::vector<int> sigma_index;
    int n_band = 2;
};

ComparisonRegion comparison_region(const SolutionTriple& a, const SolutionTriple& b,
                                   const JumpMeasure& jm, int n_band);

/// Family infimum: per-path minimum over the pairwise regions.
ComparisonRegion family_region(const std::vector<ComparisonRegion>& regions);

struct ComparisonReport {
    long violations = 0;
    long checked = 0;
    double fraction = 0.0;
    double worst_gap = 0.0;  // largest Y_a - Y_b - tol excess observed
};

/// Counts (path, i) with i <= sigma_bar and
/// Y_a > Y_b + se_multiplier * (se_a + se_b) + abs_tol.
ComparisonReport compare_solutions(const SolutionTriple& a, const SolutionTriple& b,
                                   const ComparisonRegion& region, double se_multiplier,
                                   double abs_tol);

struct GameValues {
    std::vector<double> upper_V;    // per-path min_delta Y^delta(sigma)
    std::vector<double> lower_V;    // identified with the min-generator solution
    std::vector<double> y_min_gen;  // per-path Y(sigma) for the minimum generator
    std::vector<double> u;          // -lower_V
    double mean_upper = 0.0;
    double mean_lower = 0.0;
    double mean_min_gen = 0.0;
    double combined_se = 0.0;
    double cross_check_sup_inf = 0.0;  // direct sup over candidate stops of inf_delta X
    double cross_check_gap = 0.0;      // |cross check - mean_lower|
};

GameValues robust_values(const AmbiguitySet& amb, const ObstacleSpec& obstacle,
                         const TerminalSpec& term, const PathBundle& paths,
                         const DelayMeasure& dm, const RegressionConfig& rcfg,
                         const PicardConfig& pcfg, int sigma, double epsilon);

struct SaddleInequality {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double se = 0.0;
    bool pass = false;  // lhs <= rhs + 3 se
};

struct SaddleCertificate {
    double delta_bar = 0.0;
    StoppingField tau_star;
    std::vector<SaddleInequality> checks;
    bool all_pass = false;
};

SaddleCertificate saddle_point(const AmbiguitySet& amb, const ObstacleSpec& obstacle,
                               const TerminalSpec& term, const PathBundle& paths,
                               const DelayMeasure& dm, const RegressionConfig& rcfg,
                               const PicardConfig& pcfg, int sigma, double epsilon);

/// Certificate for an explicitly supplied worst-case parameter; saddle_point
/// delegates here after picking the argmin. Lets a negative control feed a
/// mislabeled delta_bar.
SaddleCertificate make_saddle_certificate(const AmbiguitySet& amb, double delta_bar,
                                          const ReflectedSolution& min_gen_sol,
                                          const ObstacleSpec& obstacle,
                                          const PathBundle& paths, const DelayMeasure& dm,
                                          const RegressionConfig& rcfg,
                                          const PicardConfig& pcfg, int sigma,
                                          double epsilon);

}  // namespace bsdelab
