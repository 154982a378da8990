#pragma once

#include <stdexcept>
#include <string>

namespace bsdelab {

struct InvalidConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorruptedDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegressionSingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedRegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during a backward sweep.
struct DivergedError : std::runtime_error {
    int time_index;
    DivergedError(const std::string& msg, int index)
        : std::runtime_error(msg), time_index(index) {}
};

}  // namespace bsdelab
