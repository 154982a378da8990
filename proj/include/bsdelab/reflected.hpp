#pragma once

#include <vector>

#include "bsdelab/bsde.hpp"

namespace bsdelab {

/// Obstacle S(t, state). Kind::None is the no-obstacle sentinel: the solve
/// degenerates to the plain BSDE and K stays identically zero.
struct ObstacleSpec {
    enum class Kind { None, Put, Call, Polynomial };
    Kind kind = Kind::None;
    double strike = 0.0;
    std::vector<double> coeffs;  // Polynomial: sum_k coeffs[k] * state^k
    bool terminal_link = true;   // xi = psi(tau) when true

    double eval(double t, double state) const;
};

struct ReflectedSolution {
    SolutionTriple base;
    Field2D<double> K;         // P x (n+1), nondecreasing, K_0 = 0
    Field2D<double> obstacle;  // P x (n+1) sampled obstacle
};

struct ReflectedResult {
    ReflectedSolution solution;
    PicardReport picard;
};

ReflectedResult solve_reflected(const TerminalData& term, const ObstacleSpec& obstacle,
                                const PathBundle& paths, const Driver& gen,
                                const DelayMeasure& dm, const RegressionConfig& rcfg,
                                const PicardConfig& pcfg);

/// Terminal resolved from the obstacle itself when terminal_link is set.
ReflectedResult solve_reflected(const TerminalSpec& term, const ObstacleSpec& obstacle,
                                const PathBundle& paths, const Driver& gen,
                                const DelayMeasure& dm, const RegressionConfig& rcfg,
                                const PicardConfig& pcfg);

struct SkorohodReport {
    std::vector<double> per_path;
    double aggregate = 0.0;
    double max_abs = 0.0;
};

/// sum_i (Y_i - S_i) dK_i per path; exactly 0 for max-constructed solutions.
SkorohodReport skorohod_residual(const ReflectedSolution& sol);

struct StructuralReport {
    double min_gap = 0.0;          // min over (p, i <= terminal) of Y - S
    double max_k0 = 0.0;           // largest |K_0|
    double worst_increment = 0.0;  // most negative K step
    double max_residual = 0.0;     // largest per-path |complementarity residual|
    bool ok = false;
};

/// Domination, K_0 = 0, monotone K, and complementarity residual <= 1e-12.
StructuralReport check_reflected_invariants(const ReflectedSolution& sol);

}  // namespace bsdelab
