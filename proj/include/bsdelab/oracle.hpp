#pragma once

namespace bsdelab {

/// Recombining tree for a lognormal state in a zero-rate world; prices are
/// plain expectations under the tree measure matched to the given drift.
struct BinomialSpec {
    double initial = 100.0;
    double strike = 100.0;
    double volatility = 0.2;
    double drift = 0.0;
    double horizon = 1.0;
    int steps = 2000;
};

double binomial_american_put(const BinomialSpec& spec);
double binomial_european_put(const BinomialSpec& spec);

}  // namespace bsdelab
