#include "bsdelab/jump_measure.hpp"

#include <cmath>

#include "bsdelab/errors.hpp"

namespace bsdelab {

double JumpMeasure::total_mass() const {
    double s = 0.0;
    for (double l : intensities) s += l;
    return s;
}

JumpMeasure make_jump_measure(std::vector<double> marks, std::vector<double> intensities) {
    if (marks.size() != intensities.size()) {
        throw InvalidConfigError("jump measure: marks and intensities must have equal length");
    }
    for (double z : marks) {
        if (z == 0.0 || !std::isfinite(z)) {
            throw InvalidConfigError("jump measure: marks must be nonzero finite reals");
        }
    }
    for (double l : intensities) {
        if (!(l >= 0.0) || !std::isfinite(l)) {
            throw InvalidConfigError("jump measure: intensities must be nonnegative and finite");
        }
    }
    JumpMeasure jm;
    jm.marks = std::move(marks);
    jm.intensities = std::move(intensities);
    return jm;
}

std::vector<double> compensated_increment(std::span<const double> counts,
                                          const JumpMeasure& jm, double dt) {
    if (counts.size() != jm.marks.size()) {
        throw InvalidInputError("compensated increment: count vector does not match mark space");
    }
    std::vector<double> out(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] < 0.0) {
            throw CorruptedDataError("compensated increment: negative jump count");
        }
        out[j] = counts[j] - jm.intensities[j] * dt;
    }
    return out;
}

}  // namespace bsdelab
