#pragma once

#include <string>
#include <vector>

#include "bsdelab/delay.hpp"
#include "bsdelab/generator.hpp"
#include "bsdelab/paths.hpp"
#include "bsdelab/regression.hpp"
#include "bsdelab/solution.hpp"

namespace bsdelab {

struct PicardConfig {
    int max_iters = 20;
    double tol = 1e-8;
};

struct PayoffSpec {
    enum class Kind { State, Put, Call, Constant };
    Kind kind = Kind::State;
    double strike = 0.0;
    double value = 0.0;  // Constant only

    double eval(double t, double state) const;
};

struct StoppingRule {
    enum class Kind { AtHorizon, HitBelow, HitAbove };
    Kind kind = Kind::AtHorizon;
    double barrier = 0.0;
};

/// Terminal contract: a stopping rule producing tau per path and the payoff
/// xi evaluated there.
struct TerminalSpec {
    StoppingRule stopping;
    PayoffSpec payoff;
};

/// Resolved per-path terminal data the solvers consume.
struct TerminalData {
    std::vector<int> index;
    std::vector<double> value;
};

TerminalData resolve_terminal(const TerminalSpec& term, const PathBundle& paths);

struct PicardReport {
    std::vector<double> distances;  // squared-norm distance per iteration
    std::vector<double> ratios;     // successive distance ratios
    bool converged = false;
    int iterations = 0;
};

/// Squared beta-style distance between two iterates:
/// sup_i mean|dY_i|^2 + sum_i mean(|dZ_i|^2 + sum_j lambda_j |dU_ij|^2) dt.
double iterate_distance(const SolutionTriple& a, const SolutionTriple& b,
                        const PathBundle& paths);

/// One realization of the map Phi: a single backward regression sweep with
/// the generator evaluated on the frozen iterate.
SolutionTriple backward_sweep(const SolutionTriple& frozen, const TerminalData& term,
                              const PathBundle& paths, const Driver& gen,
                              const DelayMeasure& dm, const RegressionConfig& rcfg);

struct BsdeResult {
    SolutionTriple solution;
    PicardReport picard;
};

BsdeResult solve_bsde(const TerminalData& term, const PathBundle& paths, const Driver& gen,
                      const DelayMeasure& dm, const RegressionConfig& rcfg,
                      const PicardConfig& pcfg);

BsdeResult solve_bsde(const TerminalSpec& term, const PathBundle& paths, const Driver& gen,
                      const DelayMeasure& dm, const RegressionConfig& rcfg,
                      const PicardConfig& pcfg);

}  // namespace bsdelab
