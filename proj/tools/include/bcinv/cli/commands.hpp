#pragma once

#include "bcinv/cli/config.hpp"

#include <functional>
#include <iosfwd>

namespace bcinv::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 1,
    exit_characterization_failure = 2,
    exit_numerical_failure = 3,
};

/// Potential from the config -> response JSON.
int cmd_forward(const RunConfig& config, std::ostream& log);

/// Response JSON -> potential JSON plus a per-xi rcond CSV next to it. On a
/// characterization failure the CSV still receives the full sweep and no
/// potential is written.
int cmd_invert(const RunConfig& config, std::ostream& log);

/// Response JSON -> characterization report JSON; with `full`, the operator
/// identity residuals are added. Exits with 2 when the sweep fails.
int cmd_characterize(const RunConfig& config, std::ostream& log);

/// Potential + control JSON + time -> wavefield CSV (x, u_0..u_{N-1}).
int cmd_simulate(const RunConfig& config, std::ostream& log);

/// Error of the recovered potential at M, 2M, 4M -> CSV.
int cmd_roundtrip(const RunConfig& config, std::ostream& log);

/// Cosine family scan for a response whose C^xi fails while C^T passes;
/// writes that response when found.
int cmd_scan(const RunConfig& config, std::ostream& log);

/// Runs `body` and maps exceptions to exit codes, printing the message to `err`:
/// input errors 1, characterization failures 2, other numerical failures 3.
int run_guarded(const std::function<int()>& body, std::ostream& err);

/// Companion path for diagnostics: "out/potential.json" -> "out/potential.<suffix>".
std::filesystem::path sibling_path(const std::filesystem::path& path, const std::string& suffix);

}  // namespace bcinv::cli
