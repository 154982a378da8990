#include "bsdelab/reflected.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bsdelab/errors.hpp"
#include "sweep_impl.hpp"

namespace bsdelab {

double ObstacleSpec::eval(double /*t*/, double state) const {
    switch (kind) {
        case Kind::None: return -std::numeric_limits<double>::infinity();
        case Kind::Put: return std::max(strike - state, 0.0);
        case Kind::Call: return std::max(state - strike, 0.0);
        case Kind::Polynomial: {
            double acc = 0.0;
            double pow = 1.0;
            for (double c : coeffs) {
                acc += c * pow;
                pow *= state;
            }
            return acc;
        }
    }
    return 0.0;
}

namespace {

Field2D<double> sample_obstacle(const ObstacleSpec& obstacle, const PathBundle& paths) {
    const int n = paths.steps();
    Field2D<double> field(paths.n_paths, n + 1);
    for (int p = 0; p < paths.n_paths; ++p) {
        for (int i = 0; i <= n; ++i) {
            field(p, i) = obstacle.eval(paths.grid.time(i), paths.state(p, i));
        }
    }
    return field;
}

}  // namespace

ReflectedResult solve_reflected(const TerminalData& term, const ObstacleSpec& obstacle,
                                const PathBundle& paths, const Driver& gen,
                                const DelayMeasure& dm, const RegressionConfig& rcfg,
                                const PicardConfig& pcfg) {
    const int P = paths.n_paths;
    const int n = paths.steps();

    ReflectedResult result;
    result.solution.obstacle = sample_obstacle(obstacle, paths);

    if (obstacle.kind == ObstacleSpec::Kind::None) {
        BsdeResult plain = solve_bsde(term, paths, gen, dm, rcfg, pcfg);
        result.solution.base = std::move(plain.solution);
        result.solution.K = Field2D<double>(P, n + 1, 0.0);
        result.picard = std::move(plain.picard);
        return result;
    }

    // A solvable problem needs the terminal value to dominate the obstacle at tau.
    for (int p = 0; p < P; ++p) {
        const int idx = term.index[static_cast<std::size_t>(p)];
        if (term.value[static_cast<std::size_t>(p)] <
            result.solution.obstacle(p, idx) - 1e-12) {
            throw InvalidConfigError(
                "reflected solve: terminal payoff below the obstacle at the terminal time");
        }
    }

    Field2D<double> dK;
    detail::SweepOptions opts;
    opts.obstacle = &result.solution.obstacle;
    opts.reflection_increment = &dK;
    result.picard = detail::run_picard(result.solution.base, term, paths, gen, dm, rcfg, pcfg,
                                       opts);

    result.solution.K = Field2D<double>(P, n + 1, 0.0);
    for (int p = 0; p < P; ++p) {
        for (int i = 0; i < n; ++i) {
            result.solution.K(p, i + 1) = result.solution.K(p, i) + dK(p, i);
        }
    }
    return result;
}

ReflectedResult solve_reflected(const TerminalSpec& term, const ObstacleSpec& obstacle,
                                const PathBundle& paths, const Driver& gen,
                                const DelayMeasure& dm, const RegressionConfig& rcfg,
                                const PicardConfig& pcfg) {
    TerminalData data = resolve_terminal(term, paths);
    if (obstacle.terminal_link && obstacle.kind != ObstacleSpec::Kind::None) {
        for (int p = 0; p < paths.n_paths; ++p) {
            const int idx = data.index[static_cast<std::size_t>(p)];
            data.value[static_cast<std::size_t>(p)] =
                obstacle.eval(paths.grid.time(idx), paths.state(p, idx));
        }
    }
    return solve_reflected(data, obstacle, paths, gen, dm, rcfg, pcfg);
}

SkorohodReport skorohod_residual(const ReflectedSolution& sol) {
    const int P = sol.base.n_paths;
    const int n = sol.base.n_steps;
    SkorohodReport report;
    report.per_path.resize(static_cast<std::size_t>(P), 0.0);
    for (int p = 0; p < P; ++p) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dk = sol.K(p, i + 1) - sol.K(p, i);
            if (dk <= 0.0) continue;
            acc += (sol.base.Y(p, i) - sol.obstacle(p, i)) * dk;
        }
        report.per_path[static_cast<std::size_t>(p)] = acc;
        report.aggregate += acc;
        report.max_abs = std::max(report.max_abs, std::abs(acc));
    }
    report.aggregate /= P;
    return report;
}

StructuralReport check_reflected_invariants(const ReflectedSolution& sol) {
    StructuralReport report;
    for (int p = 0; p < sol.base.n_paths; ++p) {
        report.max_k0 = std::max(report.max_k0, std::abs(sol.K(p, 0)));
        const int term = sol.base.terminal_index[static_cast<std::size_t>(p)];
        for (int i = 0; i <= term; ++i) {
            report.min_gap =
                std::min(report.min_gap, sol.base.Y(p, i) - sol.obstacle(p, i));
        }
        for (int i = 0; i < sol.base.n_steps; ++i) {
            report.worst_increment =
                std::min(report.worst_increment, sol.K(p, i + 1) - sol.K(p, i));
        }
    }
    report.max_residual = skorohod_residual(sol).max_abs;
    report.ok = report.min_gap >= -1e-12 && report.max_k0 == 0.0 &&
                report.worst_increment >= 0.0 && report.max_residual <= 1e-12;
    return report;
}

}  // namespace bsdelab
