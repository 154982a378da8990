#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bsdelab/delay.hpp"
#include "bsdelab/errors.hpp"
#include "bsdelab/generator.hpp"

using namespace bsdelab;

namespace {

DelayedArgument make_arg(std::vector<double> w, std::vector<double> y, std::vector<double> z) {
    DelayedArgument arg;
    arg.weights = std::move(w);
    arg.y_past = std::move(y);
    arg.z_past = std::move(z);
    arg.u_past.assign(arg.weights.size(), {});
    return arg;
}

GeneratorSpec spec_of(GeneratorKind kind, double coeff) {
    GeneratorSpec s;
    s.kind = kind;
    s.coeff = coeff;
    s.lipschitz_K = analytic_lipschitz(s);
    return s;
}

}  // namespace

TEST_CASE("generator kind names round-trip") {
    for (auto kind : {GeneratorKind::Zero, GeneratorKind::LinearInY,
                      GeneratorKind::LaggedZConstant, GeneratorKind::ScaledAbsZ,
                      GeneratorKind::Tabulated}) {
        CHECK(generator_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(generator_kind_from_string("nope"), InvalidConfigError);
}

TEST_CASE("closed-form generator evaluations") {
    const auto arg = make_arg({0.25, 0.75}, {2.0, 4.0}, {-1.0, 3.0});
    // weighted y = 3.5, weighted z = 2.0
    CHECK(eval_generator(spec_of(GeneratorKind::Zero, 9.0), 0.0, arg) == 0.0);
    CHECK(eval_generator(spec_of(GeneratorKind::LinearInY, 0.5), 0.0, arg) ==
          doctest::Approx(1.75));
    CHECK(eval_generator(spec_of(GeneratorKind::LaggedZConstant, 0.3), 0.0, arg) ==
          doctest::Approx(0.6));
    CHECK(eval_generator(spec_of(GeneratorKind::ScaledAbsZ, -0.3), 0.0, arg) ==
          doctest::Approx(-0.6));
}

TEST_CASE("tabulated generator interpolates and clamps") {
    GeneratorSpec tab;
    tab.kind = GeneratorKind::Tabulated;
    tab.table_x = {0.0, 1.0, 2.0};
    tab.table_y = {0.0, 1.0, 0.5};
    tab.lipschitz_K = analytic_lipschitz(tab);
    CHECK(tab.lipschitz_K == doctest::Approx(1.0));  // max slope 1, squared

    CHECK(eval_generator(tab, 0.0, make_arg({1.0}, {0.5}, {0.0})) == doctest::Approx(0.5));
    CHECK(eval_generator(tab, 0.0, make_arg({1.0}, {1.5}, {0.0})) == doctest::Approx(0.75));
    CHECK(eval_generator(tab, 0.0, make_arg({1.0}, {-3.0}, {0.0})) == doctest::Approx(0.0));
    CHECK(eval_generator(tab, 0.0, make_arg({1.0}, {9.0}, {0.0})) == doctest::Approx(0.5));

    GeneratorSpec bad = tab;
    bad.table_x = {0.0, 0.0, 2.0};
    CHECK_THROWS_AS(analytic_lipschitz(bad), InvalidConfigError);
}

TEST_CASE("driver takes the pointwise minimum of its members") {
    Driver driver;
    driver.members.push_back(spec_of(GeneratorKind::ScaledAbsZ, -0.3));
    driver.members.push_back(spec_of(GeneratorKind::ScaledAbsZ, 0.3));
    CHECK(driver.lipschitz_K() == doctest::Approx(0.09));

    const auto arg = make_arg({1.0}, {0.0}, {2.0});
    CHECK(driver.eval(0.0, arg) == doctest::Approx(-0.6));
    const auto arg_neg = make_arg({1.0}, {0.0}, {-2.0});
    CHECK(driver.eval(0.0, arg_neg) == doctest::Approx(-0.6));
}

TEST_CASE("contraction report matches the closed forms") {
    const TimeGrid grid = build_time_grid(1.0, 10);

    const ContractionReport plain = check_contraction(0.01, grid, ContractionVariant::Plain);
    CHECK(plain.value == doctest::Approx(9.0 * 0.01 * std::exp(1.0)));  // 0.2446
    CHECK(plain.satisfied);

    const double k = 0.5 / std::exp(1.0);
    const ContractionReport refl = check_contraction(k, grid, ContractionVariant::Reflected);
    CHECK(refl.value == doctest::Approx(0.5));
    CHECK(refl.satisfied);
    CHECK_FALSE(check_contraction(k, grid, ContractionVariant::Plain).satisfied);

    const TimeGrid long_grid = build_time_grid(2.0, 10);
    const ContractionReport scaled =
        check_contraction(k, long_grid, ContractionVariant::Reflected);
    CHECK(scaled.value == doctest::Approx(0.5 * 4.0));  // T and max(1,T) both double
}

TEST_CASE("empirical lipschitz estimate respects the declared constant") {
    const DelayMeasure dm = no_delay();
    const JumpMeasure jm = make_jump_measure({1.0}, {0.5});
    const GeneratorSpec lin = spec_of(GeneratorKind::LinearInY, 0.4);

    const LipschitzEstimate est = estimate_lipschitz(lin, dm, jm, 2000, 5);
    CHECK(est.pairs_used > 1900);
    CHECK(est.k_hat <= 0.16 + 1e-12);
    CHECK(est.k_hat >= 0.5 * 0.16);  // the max over many pairs approaches a^2
    CHECK_FALSE(est.exceeds_declared);

    GeneratorSpec lied = lin;
    lied.lipschitz_K = 0.16 * 0.25;
    CHECK(estimate_lipschitz(lied, dm, jm, 2000, 5).exceeds_declared);

    CHECK_THROWS_AS(estimate_lipschitz(lin, dm, jm, 0, 5), InvalidConfigError);
}

TEST_CASE("segment view reads the past with the extension convention") {
    SolutionTriple series = SolutionTriple::zeros(1, 4, 1);
    for (int i = 0; i <= 4; ++i) series.Y(0, i) = 10.0 + i;
    for (int i = 0; i < 4; ++i) series.Z(0, i) = 1.0 + i;
    for (int i = 0; i < 4; ++i) series.U(0, i, 0) = 0.5 * i;

    const TimeGrid grid = build_time_grid(1.0, 4);
    const DelayMeasure dm = make_delay_measure({0.0, 0.5}, {0.5, 0.5}, 1.0);
    const std::vector<int> steps = lag_steps(dm, grid);
    CHECK(steps == std::vector<int>{0, 2});

    SUBCASE("both lags land inside the grid") {
        const DelayedArgument arg = segment_view(series, 0, 3, dm, steps);
        CHECK(arg.y_past[0] == 13.0);
        CHECK(arg.y_past[1] == 11.0);
        CHECK(arg.z_past[0] == 4.0);
        CHECK(arg.z_past[1] == 2.0);
        CHECK(arg.u_past[1][0] == 0.5);
        CHECK(arg.weighted_y() == doctest::Approx(12.0));
    }

    SUBCASE("a lag below time zero freezes y and zeroes z and u") {
        const DelayedArgument arg = segment_view(series, 0, 1, dm, steps);
        CHECK(arg.y_past[0] == 11.0);
        CHECK(arg.y_past[1] == 10.0);  // frozen at Y(0)
        CHECK(arg.z_past[1] == 0.0);
        CHECK(arg.u_past[1][0] == 0.0);
    }

    SUBCASE("the terminal time has no z sample") {
        const DelayedArgument arg = segment_view(series, 0, 4, dm, steps);
        CHECK(arg.y_past[0] == 14.0);
        CHECK(arg.z_past[0] == 0.0);  // z undefined at t_n, zeroed
        CHECK(arg.z_past[1] == 3.0);
    }
}

TEST_CASE("delay measure validation") {
    CHECK_THROWS_AS(make_delay_measure({0.1}, {0.9}, 1.0), InvalidConfigError);
    CHECK_THROWS_AS(make_delay_measure({0.1, 0.2}, {1.0}, 1.0), InvalidConfigError);
    CHECK_THROWS_AS(make_delay_measure({2.0}, {1.0}, 1.0), InvalidConfigError);
    CHECK_THROWS_AS(make_delay_measure({-0.1}, {1.0}, 1.0), InvalidConfigError);

    const TimeGrid grid = build_time_grid(1.0, 3);
    const DelayMeasure off = make_delay_measure({0.5}, {1.0}, 1.0);
    CHECK_THROWS_AS(lag_steps(off, grid), InvalidConfigError);
}
