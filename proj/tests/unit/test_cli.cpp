#include <doctest.h>

#include <filesystem>

#include "starext/cli/runner.hpp"
#include "starext/cli/schema.hpp"
#include "starext/errors.hpp"

using namespace starext;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json flat_config() {
  return json::parse(R"({"name": "flat", "order": 2, "scenario": {"kind": "flat", "n": 1},
                         "tests": {"random_triples": 3, "seed": 5}})");
}

std::string config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("schema violations name both paths") {
  json j = flat_config();
  j["scenario"] = {{"kind", "hypersurface_log"}};
  std::string msg = config_error(j);
  CHECK(msg.find("'psi'") != std::string::npos);
  CHECK(msg.find("/scenario") != std::string::npos);
  CHECK(msg.find("#/properties/scenario") != std::string::npos);

  j = flat_config();
  j["order"] = 9;
  CHECK(config_error(j).find("/order") != std::string::npos);
  j = flat_config();
  j["bogus"] = 1;
  CHECK_FALSE(config_error(j).empty());
  j = flat_config();
  j["tests"].erase("seed");
  CHECK(config_error(j).find("seed") != std::string::npos);
  CHECK(config_error(flat_config()).empty());
}

TEST_CASE("schema subset keywords") {
  json schema = json::parse(R"({"type": "object", "properties": {"k": {"enum": ["a", "b"]},
                                "v": {"type": "array", "items": {"type": "integer", "minimum": 0}, "maxItems": 2}}})");
  CHECK_FALSE(validate_against_schema(json::parse(R"({"k": "a", "v": [1, 2]})"), schema));
  auto item = validate_against_schema(json::parse(R"({"k": "a", "v": [1, -2]})"), schema);
  REQUIRE(item);
  CHECK(item->instance_path == "/v/1");
  CHECK(item->schema_path.find("minimum") != std::string::npos);
  CHECK(validate_against_schema(json::parse(R"({"k": "c"})"), schema));
  CHECK(validate_against_schema(json::parse(R"({"v": [1, 2, 3]})"), schema));
}

TEST_CASE("config hash ignores output locations and tracks content") {
  RunConfig a = parse_config(flat_config());
  json with_paths = flat_config();
  with_paths["cache_dir"] = "/tmp/x";
  with_paths["output"] = "/tmp/report.json";
  RunConfig b = parse_config(with_paths);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 64);
  RunConfig c = a;
  apply_overrides(c, 3, std::nullopt, std::nullopt);
  CHECK(config_hash(c) != config_hash(a));
  CHECK(c.order == 3);
  CHECK_THROWS_AS(apply_overrides(c, 7, std::nullopt, std::nullopt), ConfigError);
}

TEST_CASE("reports are byte-stable without timings") {
  RunOptions opt;
  opt.include_timings = false;
  RunConfig cfg = parse_config(flat_config());
  RunResult one = cmd_run(cfg, opt), two = cmd_run(cfg, opt);
  CHECK(one.pass);
  CHECK(one.exit_code == 0);
  CHECK(one.report.dump() == two.report.dump());
  CHECK_FALSE(one.report.contains("timings"));
  CHECK(one.report["extension"]["scenario_hash"] == config_hash(cfg));
}

TEST_CASE("warm cache gives the cold report") {
  fs::path dir = fs::temp_directory_path() / "starext_cache_test";
  fs::remove_all(dir);
  RunOptions opt;
  opt.include_timings = false;
  opt.cache_dir = dir.string();
  json j = flat_config();
  j["scenario"] = json::parse(R"({"kind": "hypersurface_log", "psi": "z1*zb1 - 1"})");
  RunConfig cfg = parse_config(j);
  RunResult cold = cmd_run(cfg, opt);
  CHECK(fs::exists(dir / (config_hash(cfg) + ".json")));
  RunResult warm = cmd_run(cfg, opt);
  CHECK(cold.pass);
  CHECK(cold.report.dump() == warm.report.dump());
  fs::remove_all(dir);
}

TEST_CASE("batch keeps input order and exit codes") {
  json bad = flat_config();
  bad["name"] = "circle without root datum";
  bad["scenario"] = json::parse(R"({"kind": "psiN_family", "psi": "z1*zb1 - 1", "N": 1})");
  auto results = run_batch({parse_config(flat_config()), parse_config(bad)}, {});
  REQUIRE(results.size() == 2);
  CHECK(results[0].exit_code == 0);
  CHECK(results[1].exit_code == 2);
  CHECK(results[1].report["name"] == "circle without root datum");
}

TEST_CASE("text commands") {
  CHECK(format_series(FormalFunc({z(1) * zb(1), ExactScalar(1)})) == "z1*zb1 + ν");
  RunConfig cfg = parse_config(flat_config());
  CHECK(cmd_star(cfg, "zb1", "z1") == "z1*zb1 + ν");
  CHECK(cmd_op_root(1, 0) == "A = t0\nresidual: 0");
  CHECK(cmd_op_divide("δ", 1, 1).find("residual: 0") != std::string::npos);
}
