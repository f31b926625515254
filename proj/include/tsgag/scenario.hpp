#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsgag/gagliardo.hpp"

namespace tsgag {

/// One scenario file: a time scale, named functions on it, command
/// parameters, and quadrature overrides.
struct Scenario {
  std::string id;
  TimeScale timescale;
  std::map<std::string, TSFunction> functions;

  double alpha = 0.5;
  double p = 2.0;
  std::optional<double> beta, theta, q, x0, constant;
  std::vector<int> cells_per_interval;
  std::optional<std::vector<double>> weights;  // discrete-poincare override
  int samples = 100;
  std::uint64_t seed = 0;
  std::string method = "eigensolve";  // poincare constant method
  std::string function_name = "u";
  std::string rhs_name = "f";
  std::optional<double> rl_a, rl_b;

  QuadConfig quad;
  std::vector<std::string> commands;  // consumed by `report`

  const TSFunction& function(const std::string& name) const;
  SeminormParams seminorm_params() const { return {alpha, p, nullptr}; }
};

Scenario parse_scenario(const std::string& path);

/// Options shared by all CLI commands.
struct CliOptions {
  std::string out_dir = ".";
  bool svg = false;
  bool matrices = false;
  std::optional<double> rel_tol;
  std::vector<int> mesh;  // overrides cells_per_interval; sweeps for poincare
  std::optional<std::uint64_t> seed;
};

/// Exit status classes: 0 ok, 2 mathematically notable (diverged seminorm or
/// a failed inequality), 1 operational error (thrown before this point).
struct CommandOutcome {
  int exit_code = 0;
  std::vector<std::string> artifacts;
};

extern const std::vector<std::string> kCommands;

bool is_known_command(const std::string& command);

/// Runs one command on one scenario, writing CSV (and optionally SVG)
/// artifacts under opts.out_dir.
CommandOutcome run_command(const std::string& command, const Scenario& scenario,
                           const CliOptions& opts);

/// Runs every scenario file in a directory (its `commands` list), writing
/// per-command aggregated CSVs plus an index file.
CommandOutcome run_report(const std::string& scenario_dir, const CliOptions& opts);

}  // namespace tsgag
