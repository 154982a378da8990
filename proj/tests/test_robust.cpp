#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bsdelab/errors.hpp"
#include "bsdelab/robust.hpp"

using namespace bsdelab;

namespace {

struct Scenario {
    PathBundle paths;
    ObstacleSpec obstacle;
    TerminalSpec terminal;
};

Scenario drifted_put(int n_paths, std::uint64_t seed) {
    const TimeGrid grid = build_time_grid(1.0, 50);
    const JumpMeasure jm = make_jump_measure({}, {});
    ForwardModelSpec model;
    model.initial = 100.0;
    model.drift = 0.06;
    model.volatility = 0.2;

    Scenario sc{simulate_paths(model, grid, jm, n_paths, seed), {}, {}};
    sc.obstacle.kind = ObstacleSpec::Kind::Put;
    sc.obstacle.strike = 100.0;
    sc.terminal.payoff.kind = PayoffSpec::Kind::State;
    return sc;
}

AmbiguitySet abs_z_family(std::vector<double> deltas) {
    AmbiguitySet amb;
    amb.family_kind = GeneratorKind::ScaledAbsZ;
    amb.deltas = std::move(deltas);
    return amb;
}

DelayedArgument random_arg(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    DelayedArgument arg;
    arg.weights = {1.0};
    arg.y_past = {gauss(rng)};
    arg.z_past = {gauss(rng)};
    arg.u_past = {{}};
    return arg;
}

}  // namespace

TEST_CASE("min generator takes the pointwise family minimum") {
    CHECK_THROWS_AS(min_generator(abs_z_family({})), InvalidConfigError);

    const Driver single = min_generator(abs_z_family({0.2}));
    const Driver pair = min_generator(abs_z_family({-0.3, 0.3}));
    CHECK(pair.lipschitz_K() == doctest::Approx(0.09));

    std::mt19937_64 rng(5);
    for (int k = 0; k < 10000; ++k) {
        const DelayedArgument arg = random_arg(rng);
        const double z = arg.weighted_z();
        CHECK(single.eval(0.0, arg) == doctest::Approx(0.2 * std::abs(z)));
        CHECK(pair.eval(0.0, arg) == doctest::Approx(-0.3 * std::abs(z)));
        // idempotence: minimizing the already-minimal singleton changes nothing
        const Driver re = min_generator(abs_z_family({-0.3}));
        CHECK(pair.eval(0.0, arg) == doctest::Approx(re.eval(0.0, arg)));
    }
}

TEST_CASE("comparison region tracks the difference band") {
    const JumpMeasure jm = make_jump_measure({}, {});
    SolutionTriple a = SolutionTriple::zeros(3, 4, 0);
    SolutionTriple b = SolutionTriple::zeros(3, 4, 0);

    SUBCASE("identical solutions exit every band immediately") {
        const ComparisonRegion region = comparison_region(a, b, jm, 2);
        for (int idx : region.sigma_index) CHECK(idx == 0);
    }

    SUBCASE("a constant unit offset stays inside a band of 2") {
        for (int p = 0; p < 3; ++p) {
            for (int i = 0; i <= 4; ++i) b.Y(p, i) = 1.0;
            for (int i = 0; i < 4; ++i) b.Z(p, i) = 1.0;
        }
        const ComparisonRegion region = comparison_region(a, b, jm, 2);
        for (int idx : region.sigma_index) CHECK(idx == 4);
    }

    SUBCASE("a blow-up exits when it leaves the band") {
        for (int p = 0; p < 3; ++p) {
            for (int i = 0; i <= 4; ++i) b.Y(p, i) = i >= 2 ? 10.0 : 1.0;
            for (int i = 0; i < 4; ++i) b.Z(p, i) = 1.0;
        }
        const ComparisonRegion region = comparison_region(a, b, jm, 2);
        for (int idx : region.sigma_index) CHECK(idx == 2);
    }

    SUBCASE("mismatched shapes are rejected") {
        const SolutionTriple c = SolutionTriple::zeros(3, 5, 0);
        CHECK_THROWS_AS(comparison_region(a, c, jm, 2), InvalidInputError);
        CHECK_THROWS_AS(comparison_region(a, b, jm, 0), InvalidInputError);
    }
}

TEST_CASE("family region is the pathwise minimum of pairwise regions") {
    ComparisonRegion r1, r2;
    r1.sigma_index = {3, 1, 4};
    r2.sigma_index = {2, 5, 4};
    const ComparisonRegion out = family_region({r1, r2});
    CHECK(out.sigma_index == std::vector<int>{2, 1, 4});
    CHECK_THROWS_AS(family_region({}), InvalidInputError);
}

TEST_CASE("violation counter flags ordered and disordered pairs correctly") {
    SolutionTriple a = SolutionTriple::zeros(2, 3, 0);
    SolutionTriple b = SolutionTriple::zeros(2, 3, 0);
    for (int p = 0; p < 2; ++p) {
        for (int i = 0; i <= 3; ++i) b.Y(p, i) = 1.0;
    }
    ComparisonRegion region;
    region.sigma_index = {3, 3};

    const ComparisonReport ok = compare_solutions(a, b, region, 0.0, 1e-12);
    CHECK(ok.violations == 0);
    CHECK(ok.checked == 8);

    const ComparisonReport flipped = compare_solutions(b, a, region, 0.0, 1e-12);
    CHECK(flipped.violations == 8);
    CHECK(flipped.fraction == doctest::Approx(1.0));
    CHECK(flipped.worst_gap == doctest::Approx(1.0 - 1e-12));

    const ComparisonReport same = compare_solutions(a, a, region, 0.0, 1e-12);
    CHECK(same.violations == 0);
}

TEST_CASE("robust game closes at the minimal generator") {
    const Scenario sc = drifted_put(4000, 51);
    const GameValues values =
        robust_values(abs_z_family({-0.3, 0.3}), sc.obstacle, sc.terminal, sc.paths,
                      no_delay(), RegressionConfig{}, PicardConfig{}, 0, 0.5);

    CHECK(values.mean_lower <= values.mean_upper + 3.0 * values.combined_se);
    CHECK(std::abs(values.mean_upper - values.mean_lower) <= 3.0 * values.combined_se);
    CHECK(values.mean_min_gen == values.mean_lower);
    for (std::size_t q = 0; q < values.u.size(); ++q) {
        CHECK(values.u[q] == -values.lower_V[q]);
    }
    CHECK(values.cross_check_gap <= 3.0 * values.combined_se + 0.05 * std::abs(values.mean_lower));
}

TEST_CASE("singleton ambiguity degenerates exactly") {
    const Scenario sc = drifted_put(1500, 52);
    const GameValues values =
        robust_values(abs_z_family({0.2}), sc.obstacle, sc.terminal, sc.paths, no_delay(),
                      RegressionConfig{}, PicardConfig{}, 0, 0.5);
    CHECK(values.mean_upper == values.mean_lower);
    for (std::size_t q = 0; q < values.upper_V.size(); ++q) {
        CHECK(values.upper_V[q] == values.lower_V[q]);
    }
}

TEST_CASE("saddle certificate passes for the true minimizer and fails when mislabeled") {
    const Scenario sc = drifted_put(4000, 53);
    const AmbiguitySet amb = abs_z_family({-0.3, 0.3});

    const SaddleCertificate cert =
        saddle_point(amb, sc.obstacle, sc.terminal, sc.paths, no_delay(), RegressionConfig{},
                     PicardConfig{}, 0, 0.5);
    CHECK(cert.delta_bar == doctest::Approx(-0.3));
    CHECK(cert.all_pass);
    CHECK(cert.checks.size() == 5);  // 3 stop candidates + 2 family members

    const ReflectedResult min_gen =
        solve_reflected(sc.terminal, sc.obstacle, sc.paths, min_generator(amb), no_delay(),
                        RegressionConfig{}, PicardConfig{});
    const SaddleCertificate lied =
        make_saddle_certificate(amb, 0.3, min_gen.solution, sc.obstacle, sc.paths,
                                no_delay(), RegressionConfig{}, PicardConfig{}, 0, 0.5);
    CHECK_FALSE(lied.all_pass);
}

TEST_CASE("unattained minimum is an unsupported regime for the saddle search") {
    const Scenario sc = drifted_put(300, 54);
    AmbiguitySet amb = abs_z_family({-0.3, 0.3});
    amb.contains_min = false;
    CHECK_THROWS_AS(saddle_point(amb, sc.obstacle, sc.terminal, sc.paths, no_delay(),
                                 RegressionConfig{}, PicardConfig{}, 0, 0.5),
                    UnsupportedRegimeError);
}

TEST_CASE("family members violating the reflected contraction bound are rejected") {
    const Scenario sc = drifted_put(300, 55);
    CHECK_THROWS_AS(robust_values(abs_z_family({1.0}), sc.obstacle, sc.terminal, sc.paths,
                                  no_delay(), RegressionConfig{}, PicardConfig{}, 0, 0.5),
                    InvalidConfigError);
}
