#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "starext/scenarios/scenarios.hpp"

namespace starext {

/// Parsed and schema-checked run configuration.
struct RunConfig {
  nlohmann::json raw;
  std::string name;
  int order = 0;
  nlohmann::json scenario;
  SuiteSettings tests;
  std::optional<std::string> cache_dir;
  std::optional<std::string> output;
  /// Where the config came from (for messages).
  std::string source;
};

/// Throws ConfigError naming the instance and schema paths of the violation.
RunConfig parse_config(const nlohmann::json& j, const std::string& source = "<memory>");
RunConfig load_config(const std::string& path);
/// Re-validates after command-line overrides.
void apply_overrides(RunConfig& cfg, std::optional<int> order, std::optional<unsigned long long> seed,
                     std::optional<std::string> cache_dir);

/// SHA-256 (hex) of the canonical config text.
std::string config_hash(const RunConfig& cfg);

Scenario build_scenario(const RunConfig& cfg);

struct RunOptions {
  std::optional<std::string> cache_dir;
  bool include_operators = false;
  bool include_timings = true;
};

struct RunResult {
  nlohmann::json report;
  bool pass = false;
  /// 0 pass, 1 check failure, 2 configuration rejected.
  int exit_code = 0;
  std::string summary;
};

RunResult cmd_run(const RunConfig& cfg, const RunOptions& opt = {});
/// Independent configs in parallel; results in input order.
std::vector<RunResult> run_batch(const std::vector<RunConfig>& cfgs, const RunOptions& opt = {});

/// ExtensionReport JSON with scenario_hash.
RunResult cmd_check_extension(const RunConfig& cfg);

/// "z1*zb1 + ν": unit coefficients print as a bare ν power.
std::string format_series(const FormalFunc& f);
std::string cmd_star(const RunConfig& cfg, const std::string& f, const std::string& g);
std::string cmd_berezin(const RunConfig& cfg, std::optional<int> probe_degree);
/// Prints the result and its residual; throws on nonzero residual.
std::string cmd_op_root(int n, int order);
std::string cmd_op_divide(const std::string& b, int n, int r);

/// Disk cache of L and R operator tables, one file per config hash.
void load_operator_cache(const std::string& dir, const std::string& hash, const StarProduct& star);
void save_operator_cache(const std::string& dir, const std::string& hash, const StarProduct& star);

}  // namespace starext
