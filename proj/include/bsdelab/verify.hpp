#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bsdelab {

/// One acceptance-check row: pass iff |estimate - target| <= tolerance and
/// every auxiliary condition recorded in details held.
struct CriterionRow {
    int id = 0;
    std::string name;
    double estimate = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string details;
};

/// Runs the full oracle suite at desk scale. Deterministic given the seed.
std::vector<CriterionRow> oracle_suite(std::uint64_t seed);

std::string format_row(const CriterionRow& row);

}  // namespace bsdelab
