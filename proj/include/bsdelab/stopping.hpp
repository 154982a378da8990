#pragma once

#include <string>
#include <vector>

#include "bsdelab/reflected.hpp"

namespace bsdelab {

/// Per-path grid-index stopping times, built as first-hitting rules.
struct StoppingField {
    std::vector<int> indices;
    std::string rule_name;
};

StoppingField stop_now(const ReflectedSolution& sol, int sigma);
StoppingField stop_at_terminal(const ReflectedSolution& sol, int sigma);

/// rho^{psi,tau}(sigma) = -X(sigma): the plain BSDE re-solved with terminal
/// (tau, psi(tau)) and the driver stopped at tau.
struct RiskResult {
    std::vector<double> rho;
    double mean_rho = 0.0;
    double se = 0.0;  // standard error of mean_rho
    BsdeResult solve;
};

RiskResult risk_measure(const ObstacleSpec& psi, const StoppingField& tau,
                        const PathBundle& paths, const Driver& gen, const DelayMeasure& dm,
                        const RegressionConfig& rcfg, const PicardConfig& pcfg, int sigma);

/// v(sigma) = -Y(sigma) per path.
std::vector<double> value_function(const ReflectedSolution& sol, int sigma);

/// D^eps: first grid index >= sigma with Y <= S + eps, terminal when never hit.
StoppingField epsilon_optimal_time(const ReflectedSolution& sol, int sigma, double eps);

struct OptimalTimes {
    StoppingField tau_bar;    // epsilon-hit at eps = 1e-9
    StoppingField tau_star;   // first Y = S (1e-9 relative)
    StoppingField tau_tilde;  // first K increase beyond 1e-12
};

OptimalTimes optimal_times(const ReflectedSolution& sol, int sigma);

struct GapReport {
    double mean_gap = 0.0;     // mean(Y(sigma) - X(sigma)); >= 0 beyond noise
    double max_abs_gap = 0.0;
    double combined_se = 0.0;
};

/// Re-solves the plain BSDE stopped at the candidate and compares against
/// the reflected Y at sigma.
GapReport verify_optimality(const ReflectedSolution& sol, const StoppingField& candidate,
                            const ObstacleSpec& psi, const PathBundle& paths,
                            const Driver& gen, const DelayMeasure& dm,
                            const RegressionConfig& rcfg, const PicardConfig& pcfg, int sigma);

}  // namespace bsdelab
