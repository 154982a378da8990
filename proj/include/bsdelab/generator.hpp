#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsdelab/delay.hpp"
#include "bsdelab/jump_measure.hpp"
#include "bsdelab/time_grid.hpp"

namespace bsdelab {

enum class GeneratorKind {
    Zero,
    LinearInY,        // f = a * (weighted y)
    LaggedZConstant,  // f = a * (weighted z)
    ScaledAbsZ,       // f = a * |weighted z|
    Tabulated,        // f = piecewise-linear table in (weighted y)
};

GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(GeneratorKind kind);

/// Closed-form delayed generator with a declared Lipschitz constant.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Zero;
    double coeff = 0.0;
    double lipschitz_K = 0.0;
    std::vector<double> table_x;  // Tabulated only, strictly increasing
    std::vector<double> table_y;
    std::optional<double> delta;  // ambiguity parameter this instance came from
};

double eval_generator(const GeneratorSpec& spec, double t, const DelayedArgument& arg);

/// Analytic Lipschitz constant in the squared form used by the contraction
/// bound: coeff^2 for the linear families, table slope^2 for Tabulated,
/// 0 for Zero.
double analytic_lipschitz(const GeneratorSpec& spec);

/// Driver fed to the solvers: the pointwise minimum over its members.
/// A single member is a plain generator.
struct Driver {
    std::vector<GeneratorSpec> members;

    double lipschitz_K() const;
    double eval(double t, const DelayedArgument& arg) const;
};

Driver make_driver(GeneratorSpec spec);

enum class ContractionVariant { Plain, Reflected };

struct ContractionReport {
    double value = 0.0;
    bool satisfied = false;
};

/// 9*T*K*e*max(1,T) for the plain equation, K*T*e*max(1,T) for the
/// reflected one; satisfied iff < 1.
ContractionReport check_contraction(double lipschitz_K, const TimeGrid& grid,
                                    ContractionVariant variant);

struct LipschitzEstimate {
    double k_hat = 0.0;
    bool exceeds_declared = false;
    int pairs_used = 0;
};

/// Empirical check of the declared constant: max over sampled argument pairs
/// of |df|^2 / (weighted squared argument distance).
LipschitzEstimate estimate_lipschitz(const GeneratorSpec& spec, const DelayMeasure& dm,
                                     const JumpMeasure& jm, int trials, std::uint64_t seed);

}  // namespace bsdelab
