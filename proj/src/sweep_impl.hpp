#pragma once

// Shared backward-sweep machinery for the plain and reflected solvers.

#include "bsdelab/bsde.hpp"
#include "bsdelab/field.hpp"

namespace bsdelab::detail {

struct SweepOptions {
    // Reflection against this P x (n+1) obstacle field when non-null.
    const Field2D<double>* obstacle = nullptr;
    // Per-step reflection increments, P x n, written when non-null.
    Field2D<double>* reflection_increment = nullptr;
};

SolutionTriple sweep(const SolutionTriple& frozen, const TerminalData& term,
                     const PathBundle& paths, const Driver& gen, const DelayMeasure& dm,
                     const RegressionConfig& rcfg, const SweepOptions& opts);

PicardReport run_picard(SolutionTriple& out, const TerminalData& term, const PathBundle& paths,
                        const Driver& gen, const DelayMeasure& dm, const RegressionConfig& rcfg,
                        const PicardConfig& pcfg, const SweepOptions& opts);

void validate_terminal(const TerminalData& term, const PathBundle& paths);

}  // namespace bsdelab::detail
