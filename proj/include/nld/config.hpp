#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nld/fd_solver.hpp"
#include "nld/paths.hpp"
#include "nld/problem.hpp"
#include "nld/quadrature.hpp"

namespace nld {

enum class ExperimentKind { ExitTime, ExitPosition, SolveMc, SolveFd, Barrier, Ratio, Decay };

std::string to_string(ExperimentKind kind);
/// Throws ConfigError("/kind", ...) for unknown names.
ExperimentKind parse_kind(const std::string& name);
const std::vector<std::string>& kind_names();

/// Pass/fail rule evaluated on an experiment's table.
///   touch-fraction  (exit-position): fraction at (component, eps) below/above a bound;
///                   `monotone` also asks that it does not grow as eps shrinks
///   flatness        (ratio): every ratio within `factor` of the median
///   min-ratio       (exit-time): min over x of E tau >= factor * E tau at reference_x
struct CheckSpec {
    std::string name;
    std::string rule;
    std::string component;
    double eps = 0.0;
    std::optional<double> below;
    std::optional<double> above;
    bool monotone = false;
    double factor = 0.0;
    double reference_x = 0.0;
};

struct BarrierSweep {
    BarrierSpec::Geometry geometry = HalfSpaceBarrier{};
    KernelSpec kernel;
    std::vector<double> alphas;
    std::vector<double> thetas;           ///< absolute exponents
    std::vector<double> theta_fractions;  ///< exponents as fractions of alpha
    std::vector<double> distances{1.0};
    int dim = 1;
};

struct GridParams {
    int N = 2000;
    std::optional<double> dt;  ///< default: 0.9 of the CFL bound, capped at 1e-3
    int exterior_pad = 0;
};

struct ExperimentConfig {
    std::string name;
    ExperimentKind kind = ExperimentKind::ExitTime;
    std::optional<ProblemSpec> problem;
    PathConfig paths;
    QuadratureConfig quadrature;
    BarrierSweep barrier;
    GridParams grid;
    std::vector<Point> x;
    std::vector<double> times;
    double t = 1.0;
    double theta = 0.5;
    int max_order = 1;
    std::vector<double> eps;
    std::vector<CheckSpec> checks;
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::string output_dir;
    /// Normalized JSON form (flag overrides applied), the input of the hash.
    nlohmann::json canonical;
};

/// Validates against the schema; errors carry a JSON pointer to the field.
ExperimentConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a file. An unreadable file or invalid JSON is a ConfigError at "".
ExperimentConfig load_config(const std::string& path);

/// Applies command-line overrides and refreshes `canonical`.
void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed, std::optional<std::uint64_t> n_paths,
                     std::optional<unsigned> threads, std::optional<std::string> output_dir);

/// FNV-1a 64 of the canonical JSON without `threads` and `output_dir`, as hex.
std::string config_hash(const ExperimentConfig& cfg);

ProblemSpec parse_problem(const nlohmann::json& j, const std::string& path = "/problem");
DataFunction parse_data_function(const nlohmann::json& j, const std::string& path);

}  // namespace nld
