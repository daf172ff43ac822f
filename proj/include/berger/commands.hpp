#pragma once

// The four subcommands behind berger_cli. Each returns a process exit code:
// 0 success, 1 tolerance failure or non-convergence, 2 bad input.

#include "berger/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace berger {

enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitInput = 2 };

/// Residual slope required by the convergence command.
constexpr double kMinConvergenceSlope = 1.8;
/// Residuals below this are rounding noise and are left out of the slope fit.
constexpr double kRoundoffFloor = 1e-11;

int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_energy(const RunConfig& cfg, std::ostream& out);
int cmd_flow(const RunConfig& cfg, std::ostream& out);
int cmd_convergence(const RunConfig& cfg, std::ostream& out);

struct CliOverrides {
    std::optional<std::string> json_path, csv_path;
    std::optional<int> grid;
};

/// Loads the config, applies overrides and dispatches on `command`; input errors
/// (bad config, incompatible model/surface, unknown check) become exit code 2.
int run_command(const std::string& command, const std::string& config_path, const CliOverrides& overrides,
                std::ostream& out, std::ostream& err);

/// Least-squares slope of log(residual) against log(h).
double fit_slope(const std::vector<double>& h, const std::vector<double>& residual);

}  // namespace berger
