#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bsdelab/errors.hpp"
#include "bsdelab/stopping.hpp"

using namespace bsdelab;

namespace {

struct Scenario {
    PathBundle paths;
    ObstacleSpec obstacle;
    ReflectedResult result;
};

Scenario drifted_put(int n_paths, std::uint64_t seed, double strike = 100.0) {
    const TimeGrid grid = build_time_grid(1.0, 50);
    const JumpMeasure jm = make_jump_measure({}, {});
    ForwardModelSpec model;
    model.initial = 100.0;
    model.drift = 0.06;
    model.volatility = 0.2;

    TerminalSpec term;
    term.payoff.kind = PayoffSpec::Kind::State;

    Scenario sc{simulate_paths(model, grid, jm, n_paths, seed), {}, {}};
    sc.obstacle.kind = ObstacleSpec::Kind::Put;
    sc.obstacle.strike = strike;
    sc.result = solve_reflected(term, sc.obstacle, sc.paths, make_driver(GeneratorSpec{}),
                                no_delay(), RegressionConfig{}, PicardConfig{});
    return sc;
}

}  // namespace

TEST_CASE("stopping fields sit inside [sigma, terminal] with the expected ordering") {
    const Scenario sc = drifted_put(4000, 41);
    const OptimalTimes times = optimal_times(sc.result.solution, 0);

    for (int p = 0; p < sc.paths.n_paths; ++p) {
        const std::size_t q = static_cast<std::size_t>(p);
        const int term = sc.result.solution.base.terminal_index[q];
        CHECK(times.tau_bar.indices[q] >= 0);
        CHECK(times.tau_tilde.indices[q] <= term);
        CHECK(times.tau_bar.indices[q] <= times.tau_star.indices[q]);
        CHECK(times.tau_star.indices[q] <= times.tau_tilde.indices[q]);
    }

    // tau_star stops exactly on the contact set.
    int contacts = 0;
    for (int p = 0; p < sc.paths.n_paths; ++p) {
        const std::size_t q = static_cast<std::size_t>(p);
        const int idx = times.tau_star.indices[q];
        if (idx < sc.result.solution.base.terminal_index[q]) {
            const double y = sc.result.solution.base.Y(p, idx);
            const double s = sc.result.solution.obstacle(p, idx);
            CHECK(std::abs(y - s) <= 1e-9 * std::max(1.0, std::abs(s)));
            ++contacts;
        }
    }
    CHECK(contacts > 0);
}

TEST_CASE("epsilon-optimal times are monotone in epsilon") {
    const Scenario sc = drifted_put(2000, 42);
    const StoppingField tight = epsilon_optimal_time(sc.result.solution, 0, 0.1);
    const StoppingField loose = epsilon_optimal_time(sc.result.solution, 0, 1.0);
    for (std::size_t q = 0; q < tight.indices.size(); ++q) {
        CHECK(loose.indices[q] <= tight.indices[q]);
    }
    CHECK_THROWS_AS(epsilon_optimal_time(sc.result.solution, 0, 0.0), InvalidInputError);
    CHECK_THROWS_AS(epsilon_optimal_time(sc.result.solution, 0, -1.0), InvalidInputError);
}

TEST_CASE("risk of stopping now is the negative immediate payoff") {
    const Scenario sc = drifted_put(2000, 43, 105.0);
    const StoppingField now = stop_now(sc.result.solution, 0);
    const RiskResult risk =
        risk_measure(sc.obstacle, now, sc.paths, make_driver(GeneratorSpec{}), no_delay(),
                     RegressionConfig{}, PicardConfig{}, 0);
    // psi(0, s_0) = (105 - 100)^+ = 5 on every path, no time to accrue drift.
    CHECK(risk.mean_rho == doctest::Approx(-5.0).epsilon(1e-12));
    for (double r : risk.rho) CHECK(r == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("risk of stopping at the horizon recovers the mean terminal payoff") {
    const Scenario sc = drifted_put(4000, 44);
    const StoppingField at_end = stop_at_terminal(sc.result.solution, 0);
    const RiskResult risk =
        risk_measure(sc.obstacle, at_end, sc.paths, make_driver(GeneratorSpec{}), no_delay(),
                     RegressionConfig{}, PicardConfig{}, 0);
    double mean_payoff = 0.0;
    for (int p = 0; p < sc.paths.n_paths; ++p) {
        mean_payoff += std::max(100.0 - sc.paths.state(p, 50), 0.0);
    }
    mean_payoff /= sc.paths.n_paths;
    CHECK(-risk.mean_rho == doctest::Approx(mean_payoff).epsilon(1e-4));
}

TEST_CASE("value function is the negated solution") {
    const Scenario sc = drifted_put(500, 45);
    const auto v = value_function(sc.result.solution, 0);
    for (int p = 0; p < 500; ++p) {
        CHECK(v[static_cast<std::size_t>(p)] == -sc.result.solution.base.Y(p, 0));
    }
}

TEST_CASE("tau_star is optimal and stopping immediately is detectably worse") {
    const Scenario sc = drifted_put(6000, 46);
    const Driver gen = make_driver(GeneratorSpec{});
    const OptimalTimes times = optimal_times(sc.result.solution, 0);

    const GapReport star =
        verify_optimality(sc.result.solution, times.tau_star, sc.obstacle, sc.paths, gen,
                          no_delay(), RegressionConfig{}, PicardConfig{}, 0);
    CHECK(std::abs(star.mean_gap) <= 3.0 * star.combined_se);

    const GapReport now =
        verify_optimality(sc.result.solution, stop_now(sc.result.solution, 0), sc.obstacle,
                          sc.paths, gen, no_delay(), RegressionConfig{}, PicardConfig{}, 0);
    CHECK(now.mean_gap > 3.0 * now.combined_se);  // Y_0 clearly beats (100-100)^+ = 0
}

TEST_CASE("epsilon-optimality sandwich holds") {
    const Scenario sc = drifted_put(6000, 47);
    const Driver gen = make_driver(GeneratorSpec{});
    const double y0 = sc.result.solution.base.mean_y(0);
    const double se_y = mc_standard_error(sc.result.solution.base, 0);

    for (double eps : {0.25, 0.5}) {
        const StoppingField d_eps = epsilon_optimal_time(sc.result.solution, 0, eps);
        const RiskResult risk = risk_measure(sc.obstacle, d_eps, sc.paths, gen, no_delay(),
                                             RegressionConfig{}, PicardConfig{}, 0);
        const double gap = y0 - (-risk.mean_rho);
        const double se = std::sqrt(se_y * se_y + risk.se * risk.se);
        CHECK(gap >= -3.0 * se);           // stopping early cannot beat the optimum
        CHECK(gap <= 10.0 * eps + 3.0 * se);  // and loses at most a multiple of eps
    }
}

TEST_CASE("candidates outside [sigma, terminal] are rejected") {
    const Scenario sc = drifted_put(300, 48);
    StoppingField bad;
    bad.rule_name = "bad";
    bad.indices.assign(300, 0);
    CHECK_THROWS_AS(verify_optimality(sc.result.solution, bad, sc.obstacle, sc.paths,
                                      make_driver(GeneratorSpec{}), no_delay(),
                                      RegressionConfig{}, PicardConfig{}, 1),
                    InvalidInputError);

    StoppingField wrong_size;
    wrong_size.indices.assign(10, 0);
    CHECK_THROWS_AS(verify_optimality(sc.result.solution, wrong_size, sc.obstacle, sc.paths,
                                      make_driver(GeneratorSpec{}), no_delay(),
                                      RegressionConfig{}, PicardConfig{}, 0),
                    InvalidInputError);

    CHECK_THROWS_AS(risk_measure(sc.obstacle, bad, sc.paths, make_driver(GeneratorSpec{}),
                                 no_delay(), RegressionConfig{}, PicardConfig{}, 1),
                    InvalidInputError);
}
