#include "bsdelab/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bsdelab/errors.hpp"

namespace bsdelab {

GeneratorKind generator_kind_from_string(const std::string& name) {
    if (name == "zero") return GeneratorKind::Zero;
    if (name == "linear-in-y") return GeneratorKind::LinearInY;
    if (name == "lagged-z-constant") return GeneratorKind::LaggedZConstant;
    if (name == "scaled-abs-z") return GeneratorKind::ScaledAbsZ;
    if (name == "user-tabulated") return GeneratorKind::Tabulated;
    throw InvalidConfigError("unknown generator kind: " + name);
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Zero: return "zero";
        case GeneratorKind::LinearInY: return "linear-in-y";
        case GeneratorKind::LaggedZConstant: return "lagged-z-constant";
        case GeneratorKind::ScaledAbsZ: return "scaled-abs-z";
        case GeneratorKind::Tabulated: return "user-tabulated";
    }
    return "?";
}

namespace {

double interp_table(const GeneratorSpec& spec, double x) {
    const auto& xs = spec.table_x;
    const auto& ys = spec.table_y;
    if (xs.empty()) {
        throw InvalidConfigError("tabulated generator: empty table");
    }
    if (xs.size() == 1 || x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

}  // namespace

double eval_generator(const GeneratorSpec& spec, double /*t*/, const DelayedArgument& arg) {
    double value = 0.0;
    switch (spec.kind) {
        case GeneratorKind::Zero:
            return 0.0;
        case GeneratorKind::LinearInY:
            value = spec.coeff * arg.weighted_y();
            break;
        case GeneratorKind::LaggedZConstant:
            value = spec.coeff * arg.weighted_z();
            break;
        case GeneratorKind::ScaledAbsZ:
            value = spec.coeff * std::abs(arg.weighted_z());
            break;
        case GeneratorKind::Tabulated:
            value = interp_table(spec, arg.weighted_y());
            break;
    }
    if (!std::isfinite(value)) {
        throw NumericOverflowError("generator produced a non-finite drift value");
    }
    return value;
}

double analytic_lipschitz(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorKind::Zero:
            return 0.0;
        case GeneratorKind::LinearInY:
        case GeneratorKind::LaggedZConstant:
        case GeneratorKind::ScaledAbsZ:
            return spec.coeff * spec.coeff;
        case GeneratorKind::Tabulated: {
            double slope = 0.0;
            for (std::size_t k = 1; k < spec.table_x.size(); ++k) {
                const double dx = spec.table_x[k] - spec.table_x[k - 1];
                if (!(dx > 0.0)) {
                    throw InvalidConfigError("tabulated generator: abscissae must be increasing");
                }
                slope = std::max(slope, std::abs((spec.table_y[k] - spec.table_y[k - 1]) / dx));
            }
            return slope * slope;
        }
    }
    return 0.0;
}

double Driver::lipschitz_K() const {
    double k = 0.0;
    for (const auto& g : members) k = std::max(k, g.lipschitz_K);
    return k;
}

double Driver::eval(double t, const DelayedArgument& arg) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : members) best = std::min(best, eval_generator(g, t, arg));
    return best;
}

Driver make_driver(GeneratorSpec spec) {
    Driver d;
    d.members.push_back(std::move(spec));
    return d;
}

ContractionReport check_contraction(double lipschitz_K, const TimeGrid& grid,
                                    ContractionVariant variant) {
    const double T = grid.horizon;
    const double e = std::exp(1.0);
    const double base = lipschitz_K * T * e * std::max(1.0, T);
    ContractionReport report;
    report.value = variant == ContractionVariant::Plain ? 9.0 * base : base;
    report.satisfied = report.value < 1.0;
    return report;
}

LipschitzEstimate estimate_lipschitz(const GeneratorSpec& spec, const DelayMeasure& dm,
                                     const JumpMeasure& jm, int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw InvalidConfigError("estimate_lipschitz: trials must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int q = dm.size();
    const int m = jm.size();

    auto draw = [&]() {
        DelayedArgument arg;
        arg.weights = dm.weights;
        arg.y_past.resize(static_cast<std::size_t>(q));
        arg.z_past.resize(static_cast<std::size_t>(q));
        arg.u_past.assign(static_cast<std::size_t>(q),
                          std::vector<double>(static_cast<std::size_t>(m), 0.0));
        for (int k = 0; k < q; ++k) {
            arg.y_past[static_cast<std::size_t>(k)] = gauss(rng);
            arg.z_past[static_cast<std::size_t>(k)] = gauss(rng);
            for (int j = 0; j < m; ++j) {
                arg.u_past[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = gauss(rng);
            }
        }
        return arg;
    };

    LipschitzEstimate est;
    for (int trial = 0; trial < trials; ++trial) {
        const DelayedArgument a = draw();
        const DelayedArgument b = draw();
        double dist = 0.0;
        for (int k = 0; k < q; ++k) {
            const std::size_t ks = static_cast<std::size_t>(k);
            double d = (a.y_past[ks] - b.y_past[ks]) * (a.y_past[ks] - b.y_past[ks]) +
                       (a.z_past[ks] - b.z_past[ks]) * (a.z_past[ks] - b.z_past[ks]);
            for (int j = 0; j < m; ++j) {
                const double du = a.u_past[ks][static_cast<std::size_t>(j)] -
                                  b.u_past[ks][static_cast<std::size_t>(j)];
                d += jm.intensities[static_cast<std::size_t>(j)] * du * du;
            }
            dist += dm.weights[ks] * d;
        }
        if (dist <= 0.0) continue;  // degenerate pair
        const double df = eval_generator(spec, 0.0, a) - eval_generator(spec, 0.0, b);
        est.k_hat = std::max(est.k_hat, df * df / dist);
        ++est.pairs_used;
    }
    est.exceeds_declared = est.k_hat > spec.lipschitz_K;
    return est;
}

}  // namespace bsdelab
