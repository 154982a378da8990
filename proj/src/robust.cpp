#include "bsdelab/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bsdelab/errors.hpp"

namespace bsdelab {

GeneratorSpec AmbiguitySet::instantiate(double delta) const {
    GeneratorSpec spec;
    spec.kind = family_kind;
    spec.coeff = delta;
    spec.lipschitz_K = analytic_lipschitz(spec);
    spec.delta = delta;
    return spec;
}

Driver min_generator(const AmbiguitySet& amb) {
    if (amb.deltas.empty()) {
        throw InvalidConfigError("ambiguity set must be nonempty");
    }
    Driver driver;
    for (double d : amb.deltas) driver.members.push_back(amb.instantiate(d));
    return driver;
}

ComparisonRegion comparison_region(const SolutionTriple& a, const SolutionTriple& b,
                                   const JumpMeasure& jm, int n_band) {
    if (a.n_paths != b.n_paths || a.n_steps != b.n_steps || a.n_marks != b.n_marks) {
        throw InvalidInputError("comparison_region: solutions on mismatched grids");
    }
    if (n_band < 1) {
        throw InvalidInputError("comparison_region: n_band must be at least 1");
    }
    const double lo = 1.0 / n_band;
    const double hi = static_cast<double>(n_band);

    ComparisonRegion region;
    region.n_band = n_band;
    region.sigma_index.resize(static_cast<std::size_t>(a.n_paths));
    for (int p = 0; p < a.n_paths; ++p) {
        int exit_index = a.n_steps;
        for (int i = 0; i <= a.n_steps; ++i) {
            double diff = std::abs(a.Y(p, i) - b.Y(p, i));
            if (i < a.n_steps) {
                diff = std::max(diff, std::abs(a.Z(p, i) - b.Z(p, i)));
                double du = 0.0;
                for (int j = 0; j < a.n_marks; ++j) {
                    du += jm.intensities[static_cast<std::size_t>(j)] *
                          std::abs(a.U(p, i, j) - b.U(p, i, j));
                }
                diff = std::max(diff, du);
            }
            if (diff < lo || diff > hi) {
                exit_index = i;
                break;
            }
        }
        region.sigma_index[static_cast<std::size_t>(p)] = exit_index;
    }
    return region;
}

ComparisonRegion family_region(const std::vector<ComparisonRegion>& regions) {
    if (regions.empty()) {
        throw InvalidInputError("family_region: need at least one pairwise region");
    }
    ComparisonRegion out = regions.front();
    for (const ComparisonRegion& r : regions) {
        if (r.sigma_index.size() != out.sigma_index.size()) {
            throw InvalidInputError("family_region: regions on mismatched path counts");
        }
        out.n_band = std::min(out.n_band, r.n_band);
        for (std::size_t p = 0; p < out.sigma_index.size(); ++p) {
            out.sigma_index[p] = std::min(out.sigma_index[p], r.sigma_index[p]);
        }
    }
    return out;
}

ComparisonReport compare_solutions(const SolutionTriple& a, const SolutionTriple& b,
                                   const ComparisonRegion& region, double se_multiplier,
                                   double abs_tol) {
    ComparisonReport report;
    report.worst_gap = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < a.n_paths; ++p) {
        const int limit = std::min({region.sigma_index[static_cast<std::size_t>(p)],
                                    a.terminal_index[static_cast<std::size_t>(p)],
                                    b.terminal_index[static_cast<std::size_t>(p)]});
        for (int i = 0; i <= limit; ++i) {
            const double tol =
                se_multiplier * (a.y_se(p, i) + b.y_se(p, i)) + abs_tol;
            const double excess = a.Y(p, i) - b.Y(p, i) - tol;
            report.worst_gap = std::max(report.worst_gap, excess);
            ++report.checked;
            if (excess > 0.0) ++report.violations;
        }
    }
    if (report.checked > 0) {
        report.fraction = static_cast<double>(report.violations) / report.checked;
    }
    return report;
}

namespace {

std::vector<ReflectedResult> solve_family(const AmbiguitySet& amb,
                                          const ObstacleSpec& obstacle,
                                          const TerminalSpec& term, const PathBundle& paths,
                                          const DelayMeasure& dm,
                                          const RegressionConfig& rcfg,
                                          const PicardConfig& pcfg) {
    std::vector<ReflectedResult> out;
    out.reserve(amb.deltas.size());
    for (double d : amb.deltas) {
        const GeneratorSpec spec = amb.instantiate(d);
        const auto contraction =
            check_contraction(spec.lipschitz_K, paths.grid, ContractionVariant::Reflected);
        if (!contraction.satisfied) {
            throw InvalidConfigError(
                "ambiguity member violates the reflected contraction condition");
        }
        out.push_back(
            solve_reflected(term, obstacle, paths, make_driver(spec), dm, rcfg, pcfg));
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

}  // namespace

GameValues robust_values(const AmbiguitySet& amb, const ObstacleSpec& obstacle,
                         const TerminalSpec& term, const PathBundle& paths,
                         const DelayMeasure& dm, const RegressionConfig& rcfg,
                         const PicardConfig& pcfg, int sigma, double epsilon) {
    const std::vector<ReflectedResult> family =
        solve_family(amb, obstacle, term, paths, dm, rcfg, pcfg);
    const ReflectedResult min_gen =
        solve_reflected(term, obstacle, paths, min_generator(amb), dm, rcfg, pcfg);

    const int P = paths.n_paths;
    GameValues values;
    values.upper_V.resize(static_cast<std::size_t>(P));
    values.y_min_gen.resize(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : family) best = std::min(best, r.solution.base.Y(p, sigma));
        values.upper_V[static_cast<std::size_t>(p)] = best;
        values.y_min_gen[static_cast<std::size_t>(p)] = min_gen.solution.base.Y(p, sigma);
    }
    values.lower_V = values.y_min_gen;
    values.u.resize(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p) {
        values.u[static_cast<std::size_t>(p)] = -values.lower_V[static_cast<std::size_t>(p)];
    }
    values.mean_upper = mean_of(values.upper_V);
    values.mean_lower = mean_of(values.lower_V);
    values.mean_min_gen = values.mean_lower;

    double worst_family_se = 0.0;
    for (const auto& r : family) {
        worst_family_se = std::max(worst_family_se, mc_standard_error(r.solution.base, sigma));
    }
    const double min_gen_se = mc_standard_error(min_gen.solution.base, sigma);
    values.combined_se = std::sqrt(worst_family_se * worst_family_se + min_gen_se * min_gen_se);

    // Direct sup over a candidate stop panel of inf_delta X^{delta,psi,tau}.
    const OptimalTimes times = optimal_times(min_gen.solution, sigma);
    std::vector<StoppingField> panel = {
        epsilon_optimal_time(min_gen.solution, sigma, epsilon), times.tau_star,
        stop_at_terminal(min_gen.solution, sigma), stop_now(min_gen.solution, sigma)};

    double sup_inf = -std::numeric_limits<double>::infinity();
    for (const auto& tau : panel) {
        std::vector<double> inf_x(static_cast<std::size_t>(P),
                                  std::numeric_limits<double>::infinity());
        for (double d : amb.deltas) {
            const RiskResult risk = risk_measure(obstacle, tau, paths,
                                                 make_driver(amb.instantiate(d)), dm, rcfg,
                                                 pcfg, sigma);
            for (int p = 0; p < P; ++p) {
                inf_x[static_cast<std::size_t>(p)] =
                    std::min(inf_x[static_cast<std::size_t>(p)],
                             risk.solve.solution.Y(p, sigma));
            }
        }
        sup_inf = std::max(sup_inf, mean_of(inf_x));
    }
    values.cross_check_sup_inf = sup_inf;
    values.cross_check_gap = std::abs(sup_inf - values.mean_lower);
    return values;
}

SaddleCertificate make_saddle_certificate(const AmbiguitySet& amb, double delta_bar,
                                          const ReflectedSolution& min_gen_sol,
                                          const ObstacleSpec& obstacle,
                                          const PathBundle& paths, const DelayMeasure& dm,
                                          const RegressionConfig& rcfg,
                                          const PicardConfig& pcfg, int sigma,
                                          double epsilon) {
    SaddleCertificate cert;
    cert.delta_bar = delta_bar;
    const OptimalTimes times = optimal_times(min_gen_sol, sigma);
    cert.tau_star = times.tau_star;

    const Driver worst = make_driver(amb.instantiate(delta_bar));
    const RiskResult pivot =
        risk_measure(obstacle, cert.tau_star, paths, worst, dm, rcfg, pcfg, sigma);
    const double pivot_mean = -pivot.mean_rho;  // mean X^{delta_bar, psi, tau*}(sigma)

    std::vector<StoppingField> panel = {stop_now(min_gen_sol, sigma),
                                        stop_at_terminal(min_gen_sol, sigma),
                                        epsilon_optimal_time(min_gen_sol, sigma, epsilon)};
    for (const auto& tau : panel) {
        const RiskResult risk =
            risk_measure(obstacle, tau, paths, worst, dm, rcfg, pcfg, sigma);
        SaddleInequality check;
        check.name = "X(delta_bar, " + tau.rule_name + ") <= X(delta_bar, tau_star)";
        check.lhs = -risk.mean_rho;
        check.rhs = pivot_mean;
        check.se = std::sqrt(risk.se * risk.se + pivot.se * pivot.se);
        check.pass = check.lhs <= check.rhs + 3.0 * check.se;
        cert.checks.push_back(check);
    }
    for (double d : amb.deltas) {
        const RiskResult risk = risk_measure(obstacle, cert.tau_star, paths,
                                             make_driver(amb.instantiate(d)), dm, rcfg,
                                             pcfg, sigma);
        SaddleInequality check;
        check.name = "X(delta_bar, tau_star) <= X(delta=" + std::to_string(d) + ", tau_star)";
        check.lhs = pivot_mean;
        check.rhs = -risk.mean_rho;
        check.se = std::sqrt(risk.se * risk.se + pivot.se * pivot.se);
        check.pass = check.lhs <= check.rhs + 3.0 * check.se;
        cert.checks.push_back(check);
    }
    cert.all_pass = std::all_of(cert.checks.begin(), cert.checks.end(),
                                [](const SaddleInequality& c) { return c.pass; });
    return cert;
}

SaddleCertificate saddle_point(const AmbiguitySet& amb, const ObstacleSpec& obstacle,
                               const TerminalSpec& term, const PathBundle& paths,
                               const DelayMeasure& dm, const RegressionConfig& rcfg,
                               const PicardConfig& pcfg, int sigma, double epsilon) {
    if (!amb.contains_min) {
        throw UnsupportedRegimeError(
            "saddle_point requires an attained minimum; use robust_values' "
            "eta-approximation instead");
    }
    const std::vector<ReflectedResult> family =
        solve_family(amb, obstacle, term, paths, dm, rcfg, pcfg);
    double best_mean = std::numeric_limits<double>::infinity();
    double delta_bar = amb.deltas.front();
    for (std::size_t k = 0; k < amb.deltas.size(); ++k) {
        const double mean = family[k].solution.base.mean_y(sigma);
        if (mean < best_mean) {
            best_mean = mean;
            delta_bar = amb.deltas[k];
        }
    }
    const ReflectedResult min_gen =
        solve_reflected(term, obstacle, paths, min_generator(amb), dm, rcfg, pcfg);
    return make_saddle_certificate(amb, delta_bar, min_gen.solution, obstacle, paths, dm,
                                   rcfg, pcfg, sigma, epsilon);
}

}  // namespace bsdelab
