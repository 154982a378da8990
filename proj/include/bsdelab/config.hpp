#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsdelab/bsde.hpp"
#include "bsdelab/reflected.hpp"

namespace bsdelab {

/// Fully validated scenario: everything a run needs besides the subcommand.
struct ScenarioConfig {
    int schema_version = 1;
    TimeGrid grid;
    ForwardModelSpec model;
    JumpMeasure jump_measure;
    GeneratorSpec generator;
    std::vector<double> deltas;  // ambiguity parameters, robust runs only
    DelayMeasure delay;
    ObstacleSpec obstacle;  // Kind::None when the scenario has no obstacle
    TerminalSpec terminal;
    RegressionConfig regression;
    PicardConfig picard;
    int n_paths = 10000;
    std::uint64_t seed = 1;
    double sigma_time = 0.0;   // evaluation time, must sit on the grid
    double epsilon = 0.5;      // epsilon-optimal stopping threshold
    std::string digest;        // content hash of the source document
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

/// Grid index of the configured evaluation time.
int sigma_index(const ScenarioConfig& cfg);

/// FNV-1a hash of a string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace bsdelab
