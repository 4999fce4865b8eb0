#pragma once

#include "bcinv/cli/io.hpp"
#include "bcinv/characterization.hpp"
#include "bcinv/inversion.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace bcinv::cli {

/// Settings shared by every subcommand. Loaded from a JSON file and then
/// overridden by command-line flags.
///
/// Potential families ("potential" object, key "family"):
///   constant       {"value": [N*N]}
///   polynomial     {"coefficients": [[N*N], ...]}          V = sum_p c_p x^p
///   trigonometric  {"entries": [[{offset, amplitude, frequency, phase, function}]]}
///                  V_ab = offset + amplitude * sin|cos(frequency x + phase)
///   samples        {"samples": [[N*N], ...]}               M + 1 rows
///   file           {"path": "potential.json"}              relative to the working directory
struct RunConfig {
    int n = 1;
    double horizon = 1.0;
    int steps = 100;
    /// Set when N, T or M came from the config file or a flag; data files must then match.
    bool grid_explicit = false;
    std::optional<Json> potential;

    Method method = Method::resolvent;
    int stride = 1;
    double threshold = default_sigma_threshold;
    double rcond_threshold = default_rcond_threshold;
    bool full = false;

    std::string out;
    std::string response_path;
    std::string control_path;
    std::optional<double> time;

    SpaceTimeGrid grid() const { return {n, horizon, steps}; }

    /// N >= 1, M >= 8, T > 0, positive thresholds.
    void validate() const;
};

RunConfig config_from_json(const Json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Samples the configured potential at x_0..x_M of `grid`.
MatrixFunction1D evaluate_potential(const RunConfig& config, const SpaceTimeGrid& grid);

}  // namespace bcinv::cli
