#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tauq/grid.hpp"
#include "tauq/symbols.hpp"

namespace tauq {

struct McParams {
    std::uint64_t paths = 0;
    int steps = 0;
    std::uint64_t seed = 0;
};

/// Validated experiment description. JSON schema (unknown keys are errors):
/// { "preset": str, "tau": num, "t": num,
///   "grid": {"min": num, "max": num, "points": int},
///   "n_sweep": [int, ...],                  (optional; required per command)
///   "mc": {"paths": int, "steps": int, "seed": int},   (optional)
///   "levy": [{"y": num, "w": num}, ...],    (optional)
///   "out": str }                            (optional)
struct ExperimentConfig {
    std::string preset;
    double tau = 1.0;
    double t = 0.0;
    double grid_min = 0.0;
    double grid_max = 0.0;
    int grid_points = 0;
    std::vector<int> n_sweep;
    std::optional<McParams> mc;
    std::vector<std::pair<double, double>> levy;  // (y, w)
    std::string out;

    HamiltonSymbol build_symbol() const;
    GridSpec build_grid() const;
};

/// Parses and validates a JSON config; throws ConfigError on any violation.
ExperimentConfig parse_config(const std::string& json_text);

ExperimentConfig load_config(const std::string& path);

}  // namespace tauq
