#pragma once

#include <string>
#include <vector>

#include "bsdelab/config.hpp"
#include "bsdelab/verify.hpp"

namespace bsdelab {

struct RunReport {
    std::string out_dir;
    std::vector<std::string> artifacts;
    bool converged = true;
    bool invariants_ok = true;
    int exit_code = 0;  // 0 ok, 2 invariant failure, 3 non-convergence
    double elapsed_seconds = 0.0;
    std::vector<CriterionRow> rows;  // verify only
};

/// Executes one subcommand (solve|reflect|stop|robust|verify) and persists
/// CSV/JSON artifacts under out_parent via write-then-rename.
RunReport run_scenario(const ScenarioConfig& cfg, const std::string& subcommand,
                       const std::string& out_parent);

}  // namespace bsdelab
