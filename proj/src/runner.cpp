#include "bsdelab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "bsdelab/errors.hpp"
#include "bsdelab/robust.hpp"

namespace bsdelab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct OutputDir {
    fs::path tmp;
    fs::path final_path;
    std::vector<std::string> artifacts;

    explicit OutputDir(const fs::path& parent, const std::string& name)
        : tmp(parent / ("." + name + ".tmp")), final_path(parent / name) {
        fs::create_directories(parent);
        fs::remove_all(tmp);
        fs::create_directories(tmp);
    }

    std::ofstream open(const std::string& file) {
        artifacts.push_back(file);
        return std::ofstream(tmp / file);
    }

    void commit() {
        fs::remove_all(final_path);
        fs::rename(tmp, final_path);
    }
};

json picard_json(const PicardReport& rep) {
    return json{{"iterations", rep.iterations},
                {"converged", rep.converged},
                {"distances", rep.distances},
                {"ratios", rep.ratios}};
}

json base_summary(const ScenarioConfig& cfg, const std::string& subcommand, int sigma) {
    return json{{"schema_version", cfg.schema_version},
                {"subcommand", subcommand},
                {"digest", cfg.digest},
                {"seed", cfg.seed},
                {"n_paths", cfg.n_paths},
                {"sigma_index", sigma},
                {"sigma_time", cfg.sigma_time}};
}

void write_triple_csv(std::ofstream& out, const SolutionTriple& sol,
                      const Field2D<double>* k_field, const Field2D<double>* obstacle,
                      int sigma) {
    out << "path,y,y_se,z";
    for (int j = 0; j < sol.n_marks; ++j) out << ",u_" << j;
    if (k_field) out << ",k,obstacle";
    out << ",terminal_index\n";
    for (int p = 0; p < sol.n_paths; ++p) {
        const int zi = std::min(sigma, sol.n_steps - 1);
        out << p << ',' << num(sol.Y(p, sigma)) << ',' << num(sol.y_se(p, sigma)) << ','
            << num(zi >= 0 ? sol.Z(p, zi) : 0.0);
        for (int j = 0; j < sol.n_marks; ++j) {
            out << ',' << num(zi >= 0 ? sol.U(p, zi, j) : 0.0);
        }
        if (k_field) {
            out << ',' << num((*k_field)(p, sigma)) << ','
                << num((*obstacle)(p, sigma));
        }
        out << ',' << sol.terminal_index[static_cast<std::size_t>(p)] << '\n';
    }
}

std::vector<double> mean_curve(const SolutionTriple& sol) {
    std::vector<double> curve(static_cast<std::size_t>(sol.n_steps) + 1);
    for (int i = 0; i <= sol.n_steps; ++i) {
        curve[static_cast<std::size_t>(i)] = sol.mean_y(i);
    }
    return curve;
}

RunReport run_solve(const ScenarioConfig& cfg, const PathBundle& paths, OutputDir& dir) {
    const int sigma = sigma_index(cfg);
    const BsdeResult res =
        solve_bsde(cfg.terminal, paths, make_driver(cfg.generator), cfg.delay,
                   cfg.regression, cfg.picard);

    {
        std::ofstream csv = dir.open("solution.csv");
        write_triple_csv(csv, res.solution, nullptr, nullptr, sigma);
    }
    json summary = base_summary(cfg, "solve", sigma);
    summary["mean_y"] = res.solution.mean_y(sigma);
    summary["mc_se"] = mc_standard_error(res.solution, sigma);
    summary["mean_y_by_time"] = mean_curve(res.solution);
    summary["picard"] = picard_json(res.picard);
    summary["contraction"] = json{
        {"plain", check_contraction(make_driver(cfg.generator).lipschitz_K(), cfg.grid,
                                    ContractionVariant::Plain)
                      .value}};
    dir.open("summary.json") << summary.dump(2) << '\n';

    RunReport report;
    report.converged = res.picard.converged;
    report.exit_code = res.picard.converged ? 0 : 3;
    return report;
}

RunReport run_reflect(const ScenarioConfig& cfg, const PathBundle& paths, OutputDir& dir) {
    const int sigma = sigma_index(cfg);
    const ReflectedResult res =
        solve_reflected(cfg.terminal, cfg.obstacle, paths, make_driver(cfg.generator),
                        cfg.delay, cfg.regression, cfg.picard);
    const StructuralReport structural = check_reflected_invariants(res.solution);

    {
        std::ofstream csv = dir.open("solution.csv");
        write_triple_csv(csv, res.solution.base, &res.solution.K, &res.solution.obstacle,
                         sigma);
    }
    json summary = base_summary(cfg, "reflect", sigma);
    summary["mean_y"] = res.solution.base.mean_y(sigma);
    summary["mc_se"] = mc_standard_error(res.solution.base, sigma);
    summary["mean_y_by_time"] = mean_curve(res.solution.base);
    summary["picard"] = picard_json(res.picard);
    summary["structural"] = json{{"min_gap", structural.min_gap},
                                 {"max_k0", structural.max_k0},
                                 {"worst_increment", structural.worst_increment},
                                 {"max_residual", structural.max_residual},
                                 {"ok", structural.ok}};
    dir.open("summary.json") << summary.dump(2) << '\n';

    RunReport report;
    report.converged = res.picard.converged;
    report.invariants_ok = structural.ok;
    report.exit_code = !res.picard.converged ? 3 : (structural.ok ? 0 : 2);
    return report;
}

RunReport run_stop(const ScenarioConfig& cfg, const PathBundle& paths, OutputDir& dir) {
    const int sigma = sigma_index(cfg);
    const Driver gen = make_driver(cfg.generator);
    const ReflectedResult res = solve_reflected(cfg.terminal, cfg.obstacle, paths, gen,
                                                cfg.delay, cfg.regression, cfg.picard);
    const OptimalTimes times = optimal_times(res.solution, sigma);
    const StoppingField d_eps = epsilon_optimal_time(res.solution, sigma, cfg.epsilon);
    const std::vector<double> value = value_function(res.solution, sigma);

    bool ordered = true;
    for (int p = 0; p < paths.n_paths; ++p) {
        const std::size_t q = static_cast<std::size_t>(p);
        if (times.tau_bar.indices[q] > times.tau_star.indices[q] ||
            times.tau_star.indices[q] > times.tau_tilde.indices[q]) {
            ordered = false;
        }
    }
    const GapReport gap = verify_optimality(res.solution, times.tau_star, cfg.obstacle,
                                            paths, gen, cfg.delay, cfg.regression,
                                            cfg.picard, sigma);
    const RiskResult eps_risk = risk_measure(cfg.obstacle, d_eps, paths, gen, cfg.delay,
                                             cfg.regression, cfg.picard, sigma);

    {
        std::ofstream csv = dir.open("stopping.csv");
        csv << "path,tau_bar,tau_star,tau_tilde,d_eps,value\n";
        for (int p = 0; p < paths.n_paths; ++p) {
            const std::size_t q = static_cast<std::size_t>(p);
            csv << p << ',' << times.tau_bar.indices[q] << ',' << times.tau_star.indices[q]
                << ',' << times.tau_tilde.indices[q] << ',' << d_eps.indices[q] << ','
                << num(value[q]) << '\n';
        }
    }
    json summary = base_summary(cfg, "stop", sigma);
    summary["epsilon"] = cfg.epsilon;
    summary["mean_y"] = res.solution.base.mean_y(sigma);
    summary["ordering_holds"] = ordered;
    summary["tau_star_gap"] = json{{"mean_gap", gap.mean_gap},
                                   {"max_abs_gap", gap.max_abs_gap},
                                   {"combined_se", gap.combined_se}};
    summary["rho_d_eps"] = json{{"mean", eps_risk.mean_rho}, {"se", eps_risk.se}};
    summary["picard"] = picard_json(res.picard);
    dir.open("summary.json") << summary.dump(2) << '\n';

    RunReport report;
    report.converged = res.picard.converged;
    report.invariants_ok = ordered;
    report.exit_code = !res.picard.converged ? 3 : (ordered ? 0 : 2);
    return report;
}

RunReport run_robust(const ScenarioConfig& cfg, const PathBundle& paths, OutputDir& dir) {
    if (cfg.deltas.empty()) {
        throw InvalidConfigError("robust run needs generator.deltas in the config");
    }
    const int sigma = sigma_index(cfg);
    AmbiguitySet amb;
    amb.family_kind = cfg.generator.kind;
    amb.deltas = cfg.deltas;

    const GameValues values =
        robust_values(amb, cfg.obstacle, cfg.terminal, paths, cfg.delay, cfg.regression,
                      cfg.picard, sigma, cfg.epsilon);
    const SaddleCertificate cert =
        saddle_point(amb, cfg.obstacle, cfg.terminal, paths, cfg.delay, cfg.regression,
                     cfg.picard, sigma, cfg.epsilon);

    const bool weak_duality =
        values.mean_lower <= values.mean_upper + 3.0 * values.combined_se;

    {
        std::ofstream csv = dir.open("game.csv");
        csv << "path,upper_v,lower_v,u\n";
        for (int p = 0; p < paths.n_paths; ++p) {
            const std::size_t q = static_cast<std::size_t>(p);
            csv << p << ',' << num(values.upper_V[q]) << ',' << num(values.lower_V[q])
                << ',' << num(values.u[q]) << '\n';
        }
    }
    json cert_json = base_summary(cfg, "robust", sigma);
    cert_json["deltas"] = cfg.deltas;
    cert_json["delta_bar"] = cert.delta_bar;
    cert_json["mean_upper"] = values.mean_upper;
    cert_json["mean_lower"] = values.mean_lower;
    cert_json["combined_se"] = values.combined_se;
    cert_json["cross_check_sup_inf"] = values.cross_check_sup_inf;
    cert_json["cross_check_gap"] = values.cross_check_gap;
    cert_json["weak_duality"] = weak_duality;
    cert_json["all_pass"] = cert.all_pass;
    json checks = json::array();
    for (const SaddleInequality& c : cert.checks) {
        checks.push_back(json{{"name", c.name},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"se", c.se},
                              {"pass", c.pass}});
    }
    cert_json["checks"] = checks;
    dir.open("certificate.json") << cert_json.dump(2) << '\n';

    RunReport report;
    report.invariants_ok = weak_duality && cert.all_pass;
    report.exit_code = report.invariants_ok ? 0 : 2;
    return report;
}

RunReport run_verify(const ScenarioConfig& cfg, OutputDir& dir) {
    const std::vector<CriterionRow> rows = oracle_suite(cfg.seed);
    bool all_pass = true;
    {
        std::ofstream csv = dir.open("verify.csv");
        csv << "id,name,estimate,target,tolerance,pass\n";
        for (const CriterionRow& row : rows) {
            std::cout << format_row(row) << '\n';
            csv << row.id << ",\"" << row.name << "\"," << num(row.estimate) << ','
                << num(row.target) << ',' << num(row.tolerance) << ','
                << (row.pass ? 1 : 0) << '\n';
            all_pass = all_pass && row.pass;
        }
    }
    json summary{{"seed", cfg.seed}, {"all_pass", all_pass}};
    json table = json::array();
    for (const CriterionRow& row : rows) {
        table.push_back(json{{"id", row.id},
                             {"name", row.name},
                             {"estimate", row.estimate},
                             {"target", row.target},
                             {"tolerance", row.tolerance},
                             {"pass", row.pass},
                             {"details", row.details}});
    }
    summary["rows"] = table;
    dir.open("verify.json") << summary.dump(2) << '\n';

    RunReport report;
    report.rows = rows;
    report.invariants_ok = all_pass;
    report.exit_code = all_pass ? 0 : 2;
    return report;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg, const std::string& subcommand,
                       const std::string& out_parent) {
    const auto start = std::chrono::steady_clock::now();

    std::string name = (cfg.digest.empty() ? std::string("default") : cfg.digest) + "_" +
                       std::to_string(cfg.seed) + "_" + subcommand;
    OutputDir dir(out_parent, name);

    RunReport report;
    if (subcommand == "verify") {
        report = run_verify(cfg, dir);
    } else {
        if ((subcommand == "stop" || subcommand == "robust") &&
            cfg.obstacle.kind == ObstacleSpec::Kind::None) {
            throw InvalidConfigError(subcommand + " run needs an obstacle in the config");
        }
        const PathBundle paths = simulate_paths(cfg.model, cfg.grid, cfg.jump_measure,
                                                cfg.n_paths, cfg.seed);
        if (subcommand == "solve") {
            report = run_solve(cfg, paths, dir);
        } else if (subcommand == "reflect") {
            report = run_reflect(cfg, paths, dir);
        } else if (subcommand == "stop") {
            report = run_stop(cfg, paths, dir);
        } else if (subcommand == "robust") {
            report = run_robust(cfg, paths, dir);
        } else {
            throw InvalidInputError("unknown subcommand '" + subcommand + "'");
        }
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    dir.commit();
    report.out_dir = dir.final_path.string();
    report.artifacts = dir.artifacts;
    return report;
}

}  // namespace bsdelab
