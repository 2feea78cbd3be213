#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nld/config.hpp"

namespace nld {

inline constexpr const char* kVersion = "0.1.0";

struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Exit codes shared by the CLI.
enum ExitCode { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2, kExitAcceptance = 3 };

struct RunResult {
    int exit_code = kExitOk;
    std::string error;
    std::vector<CheckOutcome> checks;
    std::vector<std::string> artifacts;  ///< file names inside output_dir
    double wall_time_s = 0.0;
};

/// Writes <output_dir>/<name>.csv (plus kind-specific extras) and
/// <output_dir>/<name>.manifest.json. Runtime failures are caught, recorded in
/// the manifest and reported through `exit_code`.
///
/// CSV columns per kind:
///   exit-time      x, order, mean, stderr, censored_frac
///   exit-position  x, eps, component, fraction
///   solve-mc/-fd   t, x, value, stderr            (stderr = 0 for solve-fd)
///   barrier        alpha, theta, distance, value, err_bound
///   ratio          x, e_tau, denominator, ratio, stderr
///   decay          x, d_x, u, stderr, ratio_linear, ratio_theta
/// In more than one dimension the column x is replaced by x1..xd.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Built-in presets: figure1, figure3, figure4, figure5, prop81, es34. A
/// preset may expand to several experiments sharing an output directory.
std::vector<nlohmann::json> preset_configs(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace nld
