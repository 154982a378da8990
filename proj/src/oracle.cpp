#include "bsdelab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bsdelab/errors.hpp"

namespace bsdelab {

namespace {

double binomial_put(const BinomialSpec& spec, bool american) {
    if (spec.steps < 1 || !(spec.horizon > 0.0) || !(spec.volatility > 0.0) ||
        !(spec.initial > 0.0)) {
        throw InvalidConfigError("binomial tree: need positive steps, horizon, vol, initial");
    }
    const int n = spec.steps;
    const double dt = spec.horizon / n;
    const double u = std::exp(spec.volatility * std::sqrt(dt));
    const double d = 1.0 / u;
    const double p = (std::exp(spec.drift * dt) - d) / (u - d);
    if (!(p > 0.0) || !(p < 1.0)) {
        throw InvalidConfigError("binomial tree: drift incompatible with the lattice");
    }

    std::vector<double> value(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const double s = spec.initial * std::pow(u, 2 * j - n);
        value[static_cast<std::size_t>(j)] = std::max(spec.strike - s, 0.0);
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = 0; j <= i; ++j) {
            double cont = p * value[static_cast<std::size_t>(j) + 1] +
                          (1.0 - p) * value[static_cast<std::size_t>(j)];
            if (american) {
                const double s = spec.initial * std::pow(u, 2 * j - i);
                cont = std::max(cont, std::max(spec.strike - s, 0.0));
            }
            value[static_cast<std::size_t>(j)] = cont;
        }
    }
    return value[0];
}

}  // namespace

double binomial_american_put(const BinomialSpec& spec) { return binomial_put(spec, true); }

double binomial_european_put(const BinomialSpec& spec) { return binomial_put(spec, false); }

}  // namespace bsdelab
