#include "bsdelab/bsde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsdelab/errors.hpp"
#include "sweep_impl.hpp"

namespace bsdelab {

double PayoffSpec::eval(double /*t*/, double state) const {
    switch (kind) {
        case Kind::State: return state;
        case Kind::Put: return std::max(strike - state, 0.0);
        case Kind::Call: return std::max(state - strike, 0.0);
        case Kind::Constant: return value;
    }
    return 0.0;
}

TerminalData resolve_terminal(const TerminalSpec& term, const PathBundle& paths) {
    const int n = paths.steps();
    TerminalData data;
    data.index.resize(static_cast<std::size_t>(paths.n_paths));
    data.value.resize(static_cast<std::size_t>(paths.n_paths));
    for (int p = 0; p < paths.n_paths; ++p) {
        int idx = n;
        if (term.stopping.kind != StoppingRule::Kind::AtHorizon) {
            for (int i = 0; i <= n; ++i) {
                const double s = paths.state(p, i);
                const bool hit = term.stopping.kind == StoppingRule::Kind::HitBelow
                                     ? s <= term.stopping.barrier
                                     : s >= term.stopping.barrier;
                if (hit) {
                    idx = i;
                    break;
                }
            }
        }
        data.index[static_cast<std::size_t>(p)] = idx;
        data.value[static_cast<std::size_t>(p)] =
            term.payoff.eval(paths.grid.time(idx), paths.state(p, idx));
    }
    return data;
}

namespace detail {

void validate_terminal(const TerminalData& term, const PathBundle& paths) {
    if (term.index.size() != static_cast<std::size_t>(paths.n_paths) ||
        term.value.size() != static_cast<std::size_t>(paths.n_paths)) {
        throw InvalidInputError("terminal data does not match the path bundle");
    }
    const int n = paths.steps();
    for (int p = 0; p < paths.n_paths; ++p) {
        const int idx = term.index[static_cast<std::size_t>(p)];
        if (idx < 0 || idx > n) {
            throw InvalidInputError("terminal index outside the grid");
        }
        if (!std::isfinite(term.value[static_cast<std::size_t>(p)])) {
            throw InvalidInputError("terminal payoff is not square-integrable (non-finite sample)");
        }
    }
}

SolutionTriple sweep(const SolutionTriple& frozen, const TerminalData& term,
                     const PathBundle& paths, const Driver& gen, const DelayMeasure& dm,
                     const RegressionConfig& rcfg, const SweepOptions& opts) {
    const int P = paths.n_paths;
    const int n = paths.steps();
    const int m = paths.marks();
    const double dt = paths.grid.dt;
    const std::vector<int> steps = lag_steps(dm, paths.grid);

    SolutionTriple cur = SolutionTriple::zeros(P, n, m);
    cur.terminal_index = term.index;
    for (int p = 0; p < P; ++p) {
        for (int i = term.index[static_cast<std::size_t>(p)]; i <= n; ++i) {
            cur.Y(p, i) = term.value[static_cast<std::size_t>(p)];
        }
    }
    if (opts.reflection_increment) {
        *opts.reflection_increment = Field2D<double>(P, n, 0.0);
    }

    std::vector<int> active;
    std::vector<double> x, targets;
    active.reserve(static_cast<std::size_t>(P));
    x.reserve(static_cast<std::size_t>(P));
    targets.reserve(static_cast<std::size_t>(P));

    for (int i = n - 1; i >= 0; --i) {
        active.clear();
        for (int p = 0; p < P; ++p) {
            if (term.index[static_cast<std::size_t>(p)] > i) active.push_back(p);
        }
        if (active.empty()) continue;

        // Too few live paths for the configured basis: fall back to the mean.
        RegressionConfig cfg = rcfg;
        if (static_cast<int>(active.size()) < rcfg.min_paths_per_fit) {
            cfg.basis_degree = 0;
            cfg.min_paths_per_fit = 1;
        }

        x.clear();
        for (int p : active) x.push_back(paths.state(p, i));

        // Z by martingale-increment regression.
        targets.clear();
        for (int p : active) targets.push_back(cur.Y(p, i + 1) * paths.dW(p, i) / dt);
        const RegressionFit z_fit = regress_conditional(targets, x, cfg);
        for (std::size_t a = 0; a < active.size(); ++a) {
            cur.Z(active[a], i) = z_fit.fitted[a];
        }

        // U per mark, against the compensated jump increment.
        for (int j = 0; j < m; ++j) {
            const double lam = paths.jump_measure.intensities[static_cast<std::size_t>(j)];
            if (lam <= 0.0) continue;
            targets.clear();
            for (int p : active) {
                targets.push_back(cur.Y(p, i + 1) * (paths.jump_counts(p, i, j) - lam * dt) /
                                  (lam * dt));
            }
            const RegressionFit u_fit = regress_conditional(targets, x, cfg);
            for (std::size_t a = 0; a < active.size(); ++a) {
                cur.U(active[a], i, j) = u_fit.fitted[a];
            }
        }

        // Continuation value plus the frozen-argument generator drift.
        targets.clear();
        for (int p : active) targets.push_back(cur.Y(p, i + 1));
        const RegressionFit y_fit = regress_conditional(targets, x, cfg);

        const double t_i = paths.grid.time(i);
        for (std::size_t a = 0; a < active.size(); ++a) {
            const int p = active[a];
            const DelayedArgument arg = segment_view(frozen, p, i, dm, steps);
            const double drift = gen.eval(t_i, arg);
            double y = y_fit.fitted[a] + drift * dt;
            if (opts.obstacle) {
                const double s = (*opts.obstacle)(p, i);
                const double reflected = std::max(y, s);
                if (opts.reflection_increment) {
                    (*opts.reflection_increment)(p, i) = reflected - y;
                }
                y = reflected;
            }
            if (!std::isfinite(y)) {
                throw DivergedError("backward sweep diverged at time index " + std::to_string(i),
                                    i);
            }
            cur.Y(p, i) = y;
            cur.y_se(p, i) = y_fit.se[a];
        }
    }
    return cur;
}

PicardReport run_picard(SolutionTriple& out, const TerminalData& term, const PathBundle& paths,
                        const Driver& gen, const DelayMeasure& dm, const RegressionConfig& rcfg,
                        const PicardConfig& pcfg, const SweepOptions& opts) {
    if (pcfg.max_iters < 1) {
        throw InvalidConfigError("picard: max_iters must be at least 1");
    }
    validate_terminal(term, paths);

    SolutionTriple frozen = SolutionTriple::zeros(paths.n_paths, paths.steps(), paths.marks());
    PicardReport report;
    for (int k = 0; k < pcfg.max_iters; ++k) {
        SolutionTriple cur = sweep(frozen, term, paths, gen, dm, rcfg, opts);
        const double dist = iterate_distance(cur, frozen, paths);
        report.distances.push_back(dist);
        if (k > 0 && report.distances[static_cast<std::size_t>(k) - 1] > 0.0) {
            report.ratios.push_back(dist / report.distances[static_cast<std::size_t>(k) - 1]);
        }
        frozen = std::move(cur);
        report.iterations = k + 1;
        if (dist <= pcfg.tol) {
            report.converged = true;
            break;
        }
    }
    out = std::move(frozen);
    return report;
}

}  // namespace detail

double iterate_distance(const SolutionTriple& a, const SolutionTriple& b,
                        const PathBundle& paths) {
    const int P = a.n_paths;
    const int n = a.n_steps;
    const int m = a.n_marks;
    const double dt = paths.grid.dt;

    double sup_y = 0.0;
    for (int i = 0; i <= n; ++i) {
        double acc = 0.0;
        for (int p = 0; p < P; ++p) {
            const double d = a.Y(p, i) - b.Y(p, i);
            acc += d * d;
        }
        sup_y = std::max(sup_y, acc / P);
    }
    double flux = 0.0;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int p = 0; p < P; ++p) {
            const double dz = a.Z(p, i) - b.Z(p, i);
            acc += dz * dz;
            for (int j = 0; j < m; ++j) {
                const double du = a.U(p, i, j) - b.U(p, i, j);
                acc += paths.jump_measure.intensities[static_cast<std::size_t>(j)] * du * du;
            }
        }
        flux += acc / P * dt;
    }
    return sup_y + flux;
}

SolutionTriple backward_sweep(const SolutionTriple& frozen, const TerminalData& term,
                              const PathBundle& paths, const Driver& gen,
                              const DelayMeasure& dm, const RegressionConfig& rcfg) {
    detail::validate_terminal(term, paths);
    return detail::sweep(frozen, term, paths, gen, dm, rcfg, {});
}

BsdeResult solve_bsde(const TerminalData& term, const PathBundle& paths, const Driver& gen,
                      const DelayMeasure& dm, const RegressionConfig& rcfg,
                      const PicardConfig& pcfg) {
    BsdeResult result;
    result.picard =
        detail::run_picard(result.solution, term, paths, gen, dm, rcfg, pcfg, {});
    return result;
}

BsdeResult solve_bsde(const TerminalSpec& term, const PathBundle& paths, const Driver& gen,
                      const DelayMeasure& dm, const RegressionConfig& rcfg,
                      const PicardConfig& pcfg) {
    return solve_bsde(resolve_terminal(term, paths), paths, gen, dm, rcfg, pcfg);
}

}  // namespace bsdelab
