#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bsdelab/errors.hpp"
#include "bsdelab/regression.hpp"

using namespace bsdelab;

namespace {

RegressionConfig cfg_of(int degree, double ridge) {
    RegressionConfig cfg;
    cfg.basis_degree = degree;
    cfg.ridge = ridge;
    cfg.min_paths_per_fit = 2;
    return cfg;
}

}  // namespace

TEST_CASE("an in-span target is recovered exactly") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = gauss(rng);
        y[i] = 2.0 - 3.0 * x[i];
    }
    const RegressionFit fit = regress_conditional(y, x, cfg_of(1, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(fit.fitted[i] == doctest::Approx(y[i]).epsilon(1e-10));
    }
    CHECK(fit.residual_std == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("the fit averages out independent noise") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = 20000;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = gauss(rng);
        y[i] = x[i] * x[i] + gauss(rng);
    }
    const RegressionFit fit = regress_conditional(y, x, cfg_of(3, 1e-8));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(x[i]) < 2.0) {
            worst = std::max(worst, std::abs(fit.fitted[i] - x[i] * x[i]));
        }
    }
    CHECK(worst < 0.15);
    CHECK(fit.residual_std == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("mean of fitted values matches mean of targets") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(1000), y(1000);
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = gauss(rng);
        y[i] = std::sin(x[i]) + 0.3 * gauss(rng);
        mean_y += y[i];
    }
    mean_y /= static_cast<double>(x.size());
    const RegressionFit fit = regress_conditional(y, x, cfg_of(3, 1e-8));
    double mean_fit = 0.0;
    for (double f : fit.fitted) mean_fit += f;
    mean_fit /= static_cast<double>(fit.fitted.size());
    CHECK(mean_fit == doctest::Approx(mean_y).epsilon(1e-6));
}

TEST_CASE("a flat covariate collapses to the sample mean") {
    std::vector<double> x(100, 7.0), y(100);
    double mean = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = static_cast<double>(i);
        mean += y[i];
    }
    mean /= static_cast<double>(y.size());
    const RegressionFit fit = regress_conditional(y, x, cfg_of(3, 0.0));
    for (double f : fit.fitted) CHECK(f == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("rank deficiency without ridge is reported, ridge repairs it") {
    std::vector<double> x(100), y(100);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = i % 2 == 0 ? 0.0 : 1.0;  // two support points cannot carry degree 3
        y[i] = x[i];
    }
    CHECK_THROWS_AS(regress_conditional(y, x, cfg_of(3, 0.0)), RegressionSingularError);
    CHECK_NOTHROW(regress_conditional(y, x, cfg_of(3, 1e-6)));
}

TEST_CASE("standard errors shrink with the sample size") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto run = [&](std::size_t n) {
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = gauss(rng);
            y[i] = x[i] + gauss(rng);
        }
        const RegressionFit fit = regress_conditional(y, x, cfg_of(2, 1e-8));
        double acc = 0.0;
        for (double s : fit.se) {
            CHECK(s >= 0.0);
            acc += s;
        }
        return acc / static_cast<double>(n);
    };
    const double se_small = run(500);
    const double se_large = run(32000);
    CHECK(se_large < 0.5 * se_small);
}

TEST_CASE("input validation") {
    std::vector<double> x(10, 1.0), y(9, 1.0);
    CHECK_THROWS_AS(regress_conditional(y, x, cfg_of(1, 0.0)), InvalidInputError);

    RegressionConfig strict = cfg_of(1, 0.0);
    strict.min_paths_per_fit = 50;
    std::vector<double> small(10, 1.0);
    CHECK_THROWS_AS(regress_conditional(small, small, strict), InvalidConfigError);

    RegressionConfig bad = cfg_of(-1, 0.0);
    CHECK_THROWS_AS(regress_conditional(small, small, bad), InvalidConfigError);
}
