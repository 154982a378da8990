#include "bsdelab/paths.hpp"

#include <cmath>
#include <random>

#include "bsdelab/errors.hpp"

namespace bsdelab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t path_stream_seed(std::uint64_t master, int path) {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(path) + 1));
}

}  // namespace

void validate_forward_model(const ForwardModelSpec& model, const JumpMeasure& jm) {
    if (!(model.volatility >= 0.0)) {
        throw InvalidConfigError("forward model: volatility must be nonnegative");
    }
    if (model.dynamics == Dynamics::Geometric && !(model.initial > 0.0)) {
        throw InvalidConfigError("forward model: geometric dynamics need a positive initial state");
    }
    if (!model.jump_loadings.empty() &&
        model.jump_loadings.size() != static_cast<std::size_t>(jm.size())) {
        throw InvalidConfigError("forward model: jump loadings must match the mark space");
    }
    if (model.dynamics == Dynamics::Geometric) {
        for (double l : model.jump_loadings) {
            if (!(l > -1.0)) {
                throw InvalidConfigError(
                    "forward model: each jump loading must exceed -1 to keep the state positive");
            }
        }
    }
}

PathBundle simulate_paths(const ForwardModelSpec& model, const TimeGrid& grid,
                          const JumpMeasure& jm, int n_paths, std::uint64_t seed) {
    if (n_paths < 1) {
        throw InvalidConfigError("simulate_paths: n_paths must be at least 1");
    }
    validate_forward_model(model, jm);

    const int n = grid.steps;
    const int m = jm.size();
    const double dt = grid.dt;
    const double sqrt_dt = std::sqrt(dt);

    PathBundle bundle;
    bundle.n_paths = n_paths;
    bundle.grid = grid;
    bundle.jump_measure = jm;
    bundle.seed = seed;
    bundle.dW = Field2D<double>(n_paths, n);
    bundle.jump_counts = Field3D<double>(n_paths, n, m);
    bundle.state = Field2D<double>(n_paths, n + 1);

    std::vector<double> loadings = model.jump_loadings;
    loadings.resize(static_cast<std::size_t>(m), 0.0);

    for (int p = 0; p < n_paths; ++p) {
        std::mt19937_64 rng(path_stream_seed(seed, p));
        std::normal_distribution<double> gauss(0.0, 1.0);

        double s = model.initial;
        bundle.state(p, 0) = s;
        for (int i = 0; i < n; ++i) {
            const double dw = gauss(rng) * sqrt_dt;
            bundle.dW(p, i) = dw;

            double jump_term = 0.0;
            for (int j = 0; j < m; ++j) {
                const double lam = jm.intensities[static_cast<std::size_t>(j)];
                double count = 0.0;
                if (lam > 0.0) {
                    std::poisson_distribution<long> pois(lam * dt);
                    count = static_cast<double>(pois(rng));
                }
                bundle.jump_counts(p, i, j) = count;
                jump_term += loadings[static_cast<std::size_t>(j)] * (count - lam * dt);
            }

            if (model.dynamics == Dynamics::Geometric) {
                s = s * (1.0 + model.drift * dt + model.volatility * dw + jump_term);
            } else {
                s = s + model.drift * dt + model.volatility * dw + jump_term;
            }
            if (!std::isfinite(s)) {
                throw NumericOverflowError("simulate_paths: non-finite forward state");
            }
            bundle.state(p, i + 1) = s;
        }
    }
    return bundle;
}

}  // namespace bsdelab
