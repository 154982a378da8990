#include "bsdelab/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsdelab/errors.hpp"

namespace bsdelab {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw InvalidConfigError(std::string("config: missing key '") + key + "' in " + where);
    }
    return *it;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    return it->get<T>();
}

Dynamics dynamics_from_string(const std::string& name) {
    if (name == "geometric") return Dynamics::Geometric;
    if (name == "arithmetic") return Dynamics::Arithmetic;
    throw InvalidConfigError("config: model.dynamics must be 'geometric' or 'arithmetic'");
}

PayoffSpec::Kind payoff_kind(const std::string& name) {
    if (name == "state") return PayoffSpec::Kind::State;
    if (name == "put") return PayoffSpec::Kind::Put;
    if (name == "call") return PayoffSpec::Kind::Call;
    if (name == "constant") return PayoffSpec::Kind::Constant;
    throw InvalidConfigError("config: terminal.payoff.kind must be one of "
                             "state|put|call|constant");
}

StoppingRule::Kind stopping_kind(const std::string& name) {
    if (name == "at-horizon") return StoppingRule::Kind::AtHorizon;
    if (name == "hit-below") return StoppingRule::Kind::HitBelow;
    if (name == "hit-above") return StoppingRule::Kind::HitAbove;
    throw InvalidConfigError("config: terminal.stopping.kind must be one of "
                             "at-horizon|hit-below|hit-above");
}

ObstacleSpec::Kind obstacle_kind(const std::string& name) {
    if (name == "none") return ObstacleSpec::Kind::None;
    if (name == "put") return ObstacleSpec::Kind::Put;
    if (name == "call") return ObstacleSpec::Kind::Call;
    if (name == "polynomial") return ObstacleSpec::Kind::Polynomial;
    throw InvalidConfigError("config: obstacle.kind must be one of "
                             "none|put|call|polynomial");
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidConfigError(std::string("config: parse error: ") + e.what());
    }

    ScenarioConfig cfg;
    try {
        cfg.schema_version = require(j, "schema_version", "the document root").get<int>();
        if (cfg.schema_version != 1) {
            throw InvalidConfigError("config: unsupported schema_version, expected 1");
        }

        const json& grid = require(j, "grid", "the document root");
        cfg.grid = build_time_grid(require(grid, "horizon", "grid").get<double>(),
                                   require(grid, "steps", "grid").get<int>());

        const json& model = require(j, "model", "the document root");
        cfg.model.initial = require(model, "initial", "model").get<double>();
        cfg.model.drift = get_or(model, "drift", 0.0);
        cfg.model.volatility = get_or(model, "volatility", 0.0);
        cfg.model.jump_loadings =
            get_or(model, "jump_loadings", std::vector<double>{});
        cfg.model.dynamics =
            dynamics_from_string(get_or<std::string>(model, "dynamics", "geometric"));

        std::vector<double> marks;
        std::vector<double> intensities;
        if (j.contains("jump_measure")) {
            const json& jm = j["jump_measure"];
            marks = get_or(jm, "marks", std::vector<double>{});
            intensities = get_or(jm, "intensities", std::vector<double>{});
        }
        cfg.jump_measure = make_jump_measure(std::move(marks), std::move(intensities));
        validate_forward_model(cfg.model, cfg.jump_measure);

        if (j.contains("generator")) {
            const json& gen = j["generator"];
            cfg.generator.kind =
                generator_kind_from_string(get_or<std::string>(gen, "kind", "zero"));
            cfg.generator.coeff = get_or(gen, "coeff", 0.0);
            cfg.generator.table_x = get_or(gen, "table_x", std::vector<double>{});
            cfg.generator.table_y = get_or(gen, "table_y", std::vector<double>{});
            cfg.generator.lipschitz_K =
                get_or(gen, "lipschitz_k", analytic_lipschitz(cfg.generator));
            cfg.deltas = get_or(gen, "deltas", std::vector<double>{});
        }

        if (j.contains("delay")) {
            const json& delay = j["delay"];
            cfg.delay = make_delay_measure(get_or(delay, "lags", std::vector<double>{0.0}),
                                           get_or(delay, "weights", std::vector<double>{1.0}),
                                           cfg.grid.horizon);
        } else {
            cfg.delay = no_delay();
        }
        lag_steps(cfg.delay, cfg.grid);  // lags must sit on the grid

        if (j.contains("obstacle")) {
            const json& obs = j["obstacle"];
            cfg.obstacle.kind = obstacle_kind(get_or<std::string>(obs, "kind", "none"));
            cfg.obstacle.strike = get_or(obs, "strike", 0.0);
            cfg.obstacle.coeffs = get_or(obs, "coeffs", std::vector<double>{});
            cfg.obstacle.terminal_link = get_or(obs, "terminal_link", true);
        }

        const json& term = require(j, "terminal", "the document root");
        if (term.contains("stopping")) {
            const json& st = term["stopping"];
            cfg.terminal.stopping.kind =
                stopping_kind(get_or<std::string>(st, "kind", "at-horizon"));
            cfg.terminal.stopping.barrier = get_or(st, "barrier", 0.0);
        }
        const json& payoff = require(term, "payoff", "terminal");
        cfg.terminal.payoff.kind =
            payoff_kind(get_or<std::string>(payoff, "kind", "state"));
        cfg.terminal.payoff.strike = get_or(payoff, "strike", 0.0);
        cfg.terminal.payoff.value = get_or(payoff, "value", 0.0);

        if (j.contains("regression")) {
            const json& reg = j["regression"];
            cfg.regression.basis_degree = get_or(reg, "degree", 3);
            cfg.regression.ridge = get_or(reg, "ridge", 1e-8);
            cfg.regression.min_paths_per_fit = get_or(reg, "min_paths_per_fit", 32);
            cfg.regression.hinge_knots = get_or(reg, "knots", 8);
            if (cfg.regression.basis_degree < 0 || cfg.regression.ridge < 0.0 ||
                cfg.regression.min_paths_per_fit < 1 || cfg.regression.hinge_knots < 0) {
                throw InvalidConfigError(
                    "config: regression needs degree >= 0, ridge >= 0, knots >= 0, "
                    "min_paths_per_fit >= 1");
            }
        }
        if (j.contains("picard")) {
            const json& pic = j["picard"];
            cfg.picard.max_iters = get_or(pic, "max_iters", 20);
            cfg.picard.tol = get_or(pic, "tol", 1e-8);
            if (cfg.picard.max_iters < 1 || !(cfg.picard.tol > 0.0)) {
                throw InvalidConfigError(
                    "config: picard needs max_iters >= 1 and tol > 0");
            }
        }
        if (j.contains("run")) {
            const json& run = j["run"];
            cfg.n_paths = get_or(run, "n_paths", 10000);
            cfg.seed = get_or<std::uint64_t>(run, "seed", 1);
            cfg.sigma_time = get_or(run, "sigma", 0.0);
            cfg.epsilon = get_or(run, "epsilon", 0.5);
        }
        if (cfg.n_paths < 1) {
            throw InvalidConfigError("config: run.n_paths must be at least 1");
        }
        if (!(cfg.epsilon > 0.0)) {
            throw InvalidConfigError("config: run.epsilon must be positive");
        }
        sigma_index(cfg);  // sigma must sit on the grid
    } catch (const json::exception& e) {
        throw InvalidConfigError(std::string("config: bad value type: ") + e.what());
    }

    cfg.digest = fnv1a_hex(j.dump());
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

int sigma_index(const ScenarioConfig& cfg) {
    const double ratio = cfg.sigma_time / cfg.grid.dt;
    const int idx = static_cast<int>(std::llround(ratio));
    if (idx < 0 || idx > cfg.grid.steps ||
        std::abs(ratio - idx) > 1e-9 * std::max(1.0, std::abs(ratio))) {
        throw InvalidConfigError(
            "config: run.sigma must be a grid time in [0, horizon]");
    }
    return idx;
}

}  // namespace bsdelab
