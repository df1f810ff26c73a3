#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "starext/cli/runner.hpp"
#include "starext/errors.hpp"

using namespace starext;

namespace {

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact star products with separation of variables and their extension across hypersurfaces"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<int> order;
  std::optional<unsigned long long> seed;
  std::optional<std::string> cache_dir;
  std::string json_path;
  bool quiet = false;
  app.add_option("--order", order, "Truncation order R (overrides the config)");
  app.add_option("--seed", seed, "Seed of the random probes (overrides the config)");
  app.add_option("--cache-dir", cache_dir, "Directory for operator-table caches");
  app.add_option("--json", json_path, "Write the JSON report to this file");
  app.add_flag("--quiet", quiet, "Only print the final status");

  std::vector<std::string> run_configs;
  bool with_operators = false, no_timings = false;
  auto* run = app.add_subcommand("run", "Build scenarios and run their checks (in parallel)");
  run->add_option("configs", run_configs, "Config files")->required()->check(CLI::ExistingFile);
  run->add_flag("--operators", with_operators, "Include frame operator tables in the report");
  run->add_flag("--no-timings", no_timings, "Omit timings (byte-stable reports)");

  std::string star_config, f_text, g_text;
  auto* star = app.add_subcommand("star", "Print f * g mod ν^{R+1}");
  star->add_option("config", star_config)->required()->check(CLI::ExistingFile);
  star->add_option("f", f_text)->required();
  star->add_option("g", g_text)->required();

  int root_n = 1, root_order = 1;
  auto* root = app.add_subcommand("op-root", "Root of S in the abstract algebra");
  root->add_option("N", root_n)->required()->check(CLI::Range(1, 8));
  root->add_option("R", root_order)->required()->check(CLI::Range(0, 6));

  std::string b_text;
  int div_n = 1, div_r = 0;
  auto* divide = app.add_subcommand("op-divide", "Solve the division equation for B");
  divide->add_option("B", b_text)->required();
  divide->add_option("N", div_n)->required()->check(CLI::Range(1, 8));
  divide->add_option("r", div_r)->required()->check(CLI::Range(0, 8));

  std::string ext_config;
  auto* ext = app.add_subcommand("check-extension", "Run the extension check and print its report");
  ext->add_option("config", ext_config)->required()->check(CLI::ExistingFile);

  std::string ber_config;
  std::optional<int> probe_degree;
  auto* ber = app.add_subcommand("berezin", "Print the Berezin transform");
  ber->add_option("config", ber_config)->required()->check(CLI::ExistingFile);
  ber->add_option("--probe-degree", probe_degree, "Probe degree (default R + 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  auto load = [&](const std::string& path) {
    RunConfig cfg = load_config(path);
    apply_overrides(cfg, order, seed, cache_dir);
    return cfg;
  };

  try {
    if (*run) {
      std::vector<RunConfig> cfgs;
      for (const auto& p : run_configs) cfgs.push_back(load(p));
      RunOptions opt;
      opt.include_operators = with_operators;
      opt.include_timings = !no_timings;
      auto results = run_batch(cfgs, opt);
      int code = 0;
      nlohmann::json all = nlohmann::json::array();
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        code = std::max(code, r.exit_code);
        if (!quiet) std::cout << r.summary;
        if (cfgs[i].output) write_json(*cfgs[i].output, r.report);
        all.push_back(r.report);
      }
      if (!json_path.empty()) write_json(json_path, results.size() == 1 ? all[0] : all);
      std::cout << (code == 0 ? "all scenarios passed" : "some checks failed") << "\n";
      return code;
    }
    if (*star) {
      std::cout << cmd_star(load(star_config), f_text, g_text) << "\n";
      return 0;
    }
    if (*root) {
      std::cout << cmd_op_root(root_n, root_order) << "\n";
      return 0;
    }
    if (*divide) {
      std::cout << cmd_op_divide(b_text, div_n, div_r) << "\n";
      return 0;
    }
    if (*ext) {
      RunResult r = cmd_check_extension(load(ext_config));
      if (!json_path.empty()) write_json(json_path, r.report);
      if (!quiet) std::cout << r.report.dump(2) << "\n";
      else std::cout << (r.pass ? "PASS" : "FAIL") << "\n";
      return r.exit_code;
    }
    if (*ber) {
      std::cout << cmd_berezin(load(ber_config), probe_degree) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
