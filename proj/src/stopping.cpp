#include "bsdelab/stopping.hpp"

#include <algorithm>
#include <cmath>

#include "bsdelab/errors.hpp"

namespace bsdelab {

namespace {

void check_candidate(const StoppingField& tau, const ReflectedSolution& sol, int sigma) {
    if (tau.indices.size() != static_cast<std::size_t>(sol.base.n_paths)) {
        throw InvalidInputError("stopping field does not match the solution");
    }
    for (int p = 0; p < sol.base.n_paths; ++p) {
        const int idx = tau.indices[static_cast<std::size_t>(p)];
        if (idx < sigma || idx > sol.base.terminal_index[static_cast<std::size_t>(p)]) {
            throw InvalidInputError("stopping field index outside [sigma, terminal]");
        }
    }
}

}  // namespace

StoppingField stop_now(const ReflectedSolution& sol, int sigma) {
    StoppingField field;
    field.rule_name = "now";
    field.indices.assign(static_cast<std::size_t>(sol.base.n_paths), sigma);
    return field;
}

StoppingField stop_at_terminal(const ReflectedSolution& sol, int sigma) {
    StoppingField field;
    field.rule_name = "terminal";
    field.indices.resize(static_cast<std::size_t>(sol.base.n_paths));
    for (int p = 0; p < sol.base.n_paths; ++p) {
        field.indices[static_cast<std::size_t>(p)] =
            std::max(sigma, sol.base.terminal_index[static_cast<std::size_t>(p)]);
    }
    return field;
}

RiskResult risk_measure(const ObstacleSpec& psi, const StoppingField& tau,
                        const PathBundle& paths, const Driver& gen, const DelayMeasure& dm,
                        const RegressionConfig& rcfg, const PicardConfig& pcfg, int sigma) {
    TerminalData term;
    term.index = tau.indices;
    term.value.resize(tau.indices.size());
    for (int p = 0; p < paths.n_paths; ++p) {
        const int idx = tau.indices[static_cast<std::size_t>(p)];
        if (idx < sigma) {
            throw InvalidInputError("risk_measure: stopping time before sigma");
        }
        term.value[static_cast<std::size_t>(p)] =
            psi.eval(paths.grid.time(idx), paths.state(p, idx));
    }

    RiskResult result;
    result.solve = solve_bsde(term, paths, gen, dm, rcfg, pcfg);
    result.rho.resize(static_cast<std::size_t>(paths.n_paths));
    for (int p = 0; p < paths.n_paths; ++p) {
        result.rho[static_cast<std::size_t>(p)] = -result.solve.solution.Y(p, sigma);
        result.mean_rho += result.rho[static_cast<std::size_t>(p)];
    }
    result.mean_rho /= paths.n_paths;
    result.se = mc_standard_error(result.solve.solution, sigma);
    return result;
}

std::vector<double> value_function(const ReflectedSolution& sol, int sigma) {
    std::vector<double> v(static_cast<std::size_t>(sol.base.n_paths));
    for (int p = 0; p < sol.base.n_paths; ++p) {
        v[static_cast<std::size_t>(p)] = -sol.base.Y(p, sigma);
    }
    return v;
}

StoppingField epsilon_optimal_time(const ReflectedSolution& sol, int sigma, double eps) {
    if (!(eps > 0.0)) {
        throw InvalidInputError("epsilon_optimal_time: epsilon must be positive");
    }
    StoppingField field;
    field.rule_name = "d_eps";
    field.indices.resize(static_cast<std::size_t>(sol.base.n_paths));
    for (int p = 0; p < sol.base.n_paths; ++p) {
        const int term = sol.base.terminal_index[static_cast<std::size_t>(p)];
        int hit = std::max(sigma, term);
        for (int i = sigma; i <= term; ++i) {
            if (sol.base.Y(p, i) <= sol.obstacle(p, i) + eps) {
                hit = i;
                break;
            }
        }
        field.indices[static_cast<std::size_t>(p)] = hit;
    }
    return field;
}

OptimalTimes optimal_times(const ReflectedSolution& sol, int sigma) {
    OptimalTimes times;
    times.tau_bar = epsilon_optimal_time(sol, sigma, 1e-9);
    times.tau_bar.rule_name = "tau_bar";

    times.tau_star.rule_name = "tau_star";
    times.tau_star.indices.resize(static_cast<std::size_t>(sol.base.n_paths));
    times.tau_tilde.rule_name = "tau_tilde";
    times.tau_tilde.indices.resize(static_cast<std::size_t>(sol.base.n_paths));

    for (int p = 0; p < sol.base.n_paths; ++p) {
        const int term = sol.base.terminal_index[static_cast<std::size_t>(p)];
        int star = std::max(sigma, term);
        for (int i = sigma; i <= term; ++i) {
            const double s = sol.obstacle(p, i);
            if (std::abs(sol.base.Y(p, i) - s) <= 1e-9 * std::max(1.0, std::abs(s))) {
                star = i;
                break;
            }
        }
        times.tau_star.indices[static_cast<std::size_t>(p)] = star;

        int tilde = std::max(sigma, term);
        const double k_sigma = sol.K(p, sigma);
        for (int i = sigma; i <= term; ++i) {
            if (sol.K(p, i) - k_sigma > 1e-12) {
                tilde = i;
                break;
            }
        }
        times.tau_tilde.indices[static_cast<std::size_t>(p)] = tilde;
    }
    return times;
}

GapReport verify_optimality(const ReflectedSolution& sol, const StoppingField& candidate,
                            const ObstacleSpec& psi, const PathBundle& paths,
                            const Driver& gen, const DelayMeasure& dm,
                            const RegressionConfig& rcfg, const PicardConfig& pcfg,
                            int sigma) {
    check_candidate(candidate, sol, sigma);
    const RiskResult risk =
        risk_measure(psi, candidate, paths, gen, dm, rcfg, pcfg, sigma);

    GapReport report;
    for (int p = 0; p < paths.n_paths; ++p) {
        const double gap = sol.base.Y(p, sigma) - risk.solve.solution.Y(p, sigma);
        report.mean_gap += gap;
        report.max_abs_gap = std::max(report.max_abs_gap, std::abs(gap));
    }
    report.mean_gap /= paths.n_paths;
    const double se_y = mc_standard_error(sol.base, sigma);
    report.combined_se = std::sqrt(se_y * se_y + risk.se * risk.se);
    return report;
}

}  // namespace bsdelab
