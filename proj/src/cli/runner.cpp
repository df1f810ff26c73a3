#include "starext/cli/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "starext/cli/schema.hpp"
#include "starext/diffop/json.hpp"
#include "starext/errors.hpp"
#include "starext/scalar/parse.hpp"

namespace starext {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kEngineTag = "starext-engine-1";

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

GaussianRational parse_constant(const std::string& text, const std::string& where) {
  ExactScalar s = parse_scalar(text);
  if (!s.is_constant()) throw ConfigError(where + ": '" + text + "' is not a constant");
  return s.num().constant_term();
}

std::map<Var, GaussianRational> parse_point(const json& j) {
  std::map<Var, GaussianRational> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    Var v;
    if (!lookup_variable(it.key(), v, false) || kind_of(v) == VarKind::AlgebraGenerator ||
        kind_of(v) == VarKind::Auxiliary)
      throw ConfigError("/scenario/sample_point: unknown coordinate '" + it.key() + "'");
    out[v] = parse_constant(it.value().get<std::string>(), "/scenario/sample_point/" + it.key());
  }
  return out;
}

int chart_from_psi(const Poly& psi) {
  int n = 1;
  for (Var v : psi.variables())
    if (kind_of(v) == VarKind::Holomorphic || kind_of(v) == VarKind::Antiholomorphic) n = std::max(n, index_of(v));
  return n;
}

std::map<Var, GaussianRational> default_point(const Poly& psi) {
  if (psi == parse_poly("z1*zb1 - 1")) return {{holo(1), GaussianRational(1)}, {antiholo(1), GaussianRational(1)}};
  if (psi == parse_poly("z1 + zb1"))
    return {{holo(1), GaussianRational::i()}, {antiholo(1), -GaussianRational::i()}};
  throw ConfigError("/scenario: sample_point is required for psi = " + psi.to_string());
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const UnknownVariable*>(&e) || dynamic_cast<const RootDatumMissing*>(&e) ||
      dynamic_cast<const RootDatumInvalid*>(&e) || dynamic_cast<const PivotVanishes*>(&e) ||
      dynamic_cast<const LeviDegenerate*>(&e) || dynamic_cast<const PreconditionViolated*>(&e) ||
      dynamic_cast<const SizeLimit*>(&e) || dynamic_cast<const NotUnit*>(&e))
    return 2;
  return 1;
}

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
  return a;
}

std::string summary_line(const Check& c) {
  std::string s = std::string(c.pass ? "  PASS " : "  FAIL ") + c.name;
  if (!c.details.empty()) s += ": " + c.details;
  return s + "\n";
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& source) {
  if (auto v = validate_against_schema(j, run_config_schema()))
    throw ConfigError(source + ": " + v->message + " at '" + (v->instance_path.empty() ? "/" : v->instance_path) +
                      "' (schema " + v->schema_path + ")");
  RunConfig cfg;
  cfg.raw = j;
  cfg.source = source;
  cfg.name = j["name"].get<std::string>();
  cfg.order = j["order"].get<int>();
  cfg.scenario = j["scenario"];
  const json& t = j["tests"];
  cfg.tests.seed = t["seed"].get<unsigned long long>();
  cfg.tests.random_triples = t.value("random_triples", 20);
  cfg.tests.max_degree = t.value("max_degree", 2);
  cfg.tests.probe_degree = t.value("probe_degree", -1);
  if (j.contains("cache_dir")) cfg.cache_dir = j["cache_dir"].get<std::string>();
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return parse_config(j, path);
}

void apply_overrides(RunConfig& cfg, std::optional<int> order, std::optional<unsigned long long> seed,
                     std::optional<std::string> cache_dir) {
  json j = cfg.raw;
  if (order) j["order"] = *order;
  if (seed) j["tests"]["seed"] = *seed;
  if (cache_dir) j["cache_dir"] = *cache_dir;
  std::string source = cfg.source;
  cfg = parse_config(j, source);
}

std::string config_hash(const RunConfig& cfg) {
  json j = cfg.raw;
  j.erase("cache_dir");
  j.erase("output");
  return sha256_hex(std::string(kEngineTag) + "\n" + j.dump());
}

Scenario build_scenario(const RunConfig& cfg) {
  const json& s = cfg.scenario;
  const std::string kind = s["kind"].get<std::string>();
  std::vector<Poly> units;
  for (const auto& u : s.value("units", json::array())) units.push_back(parse_poly(u.get<std::string>()));
  Scenario sc;
  if (kind == "flat") {
    sc = build_flat(s.value("n", 1), cfg.order);
  } else if (kind == "grassmannian") {
    sc = build_grassmannian(s["p"].get<int>(), s["r"].get<int>(), cfg.order);
  } else {
    Poly psi = parse_poly(s["psi"].get<std::string>());
    Chart chart{s.value("n", chart_from_psi(psi))};
    auto point = s.contains("sample_point") ? parse_point(s["sample_point"]) : default_point(psi);
    int pivot = s.value("s", 0);
    if (kind == "hypersurface_log") {
      sc = build_hypersurface_log(psi, chart, point, cfg.order, pivot, units);
    } else if (kind == "psiN_family") {
      std::optional<ExactScalar> chi;
      if (s.contains("chi")) chi = parse_scalar(s["chi"].get<std::string>());
      sc = build_psiN_family(psi, chart, point, s["N"].get<int>(), cfg.order, chi, pivot, units);
    } else {
      std::vector<ExactScalar> phi, phibar;
      for (const auto& p : s["phi"]) phi.push_back(parse_scalar(p.get<std::string>()));
      for (const auto& p : s.value("phibar", json::array())) phibar.push_back(parse_scalar(p.get<std::string>()));
      sc = build_generic(phi, phibar, psi, point, cfg.order, units);
    }
  }
  sc.name = cfg.name;
  return sc;
}

void load_operator_cache(const std::string& dir, const std::string& hash, const StarProduct& star) {
  fs::path file = fs::path(dir) / (hash + ".json");
  std::ifstream in(file);
  if (!in) return;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error&) {
    return;  // corrupt entries are ignored and rewritten
  }
  if (j.value("config_hash", std::string()) != hash || j.value("order", -1) != star.order()) return;
  for (auto it = j["left"].begin(); it != j["left"].end(); ++it)
    star.preload_left(it.key(), formal_op_from_json(it.value(), star.chart(), star.order()));
  for (auto it = j["right"].begin(); it != j["right"].end(); ++it)
    star.preload_right(it.key(), formal_op_from_json(it.value(), star.chart(), star.order()));
}

void save_operator_cache(const std::string& dir, const std::string& hash, const StarProduct& star) {
  fs::create_directories(dir);
  json j;
  j["config_hash"] = hash;
  j["order"] = star.order();
  j["left"] = json::object();
  j["right"] = json::object();
  for (const auto& [k, op] : star.cached_left()) j["left"][k] = to_json(op);
  for (const auto& [k, op] : star.cached_right()) j["right"][k] = to_json(op);
  fs::path file = fs::path(dir) / (hash + ".json");
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump() << "\n";
  }
  fs::rename(tmp, file);
}

RunResult cmd_run(const RunConfig& cfg, const RunOptions& opt) {
  RunResult res;
  const std::string hash = config_hash(cfg);
  json& rep = res.report;
  rep["report_version"] = 1;
  rep["name"] = cfg.name;
  rep["config_hash"] = hash;
  rep["kind"] = cfg.scenario["kind"];
  rep["order"] = cfg.order;
  std::optional<std::string> cache = opt.cache_dir ? opt.cache_dir : cfg.cache_dir;

  auto start = std::chrono::steady_clock::now();
  Scenario sc;
  try {
    sc = build_scenario(cfg);
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e);
    rep["pass"] = false;
    rep["error"] = e.what();
    rep["checks"] = json::array();
    rep["extension"] = {{"scenario_hash", hash}, {"pass", false}, {"checks", json::array()}, {"coefficients", json::array()}};
    res.summary = cfg.name + ": rejected: " + e.what() + "\n";
    return res;
  }
  double build_ms = elapsed_ms(start);
  if (cache) load_operator_cache(*cache, hash, *sc.star);

  start = std::chrono::steady_clock::now();
  std::vector<Check> suite;
  ExtensionReport ext;
  try {
    suite = run_invariant_suite(sc, cfg.tests);
  } catch (const Error& e) {
    suite.push_back({"invariant suite", false, e.what()});
  }
  double suite_ms = elapsed_ms(start);
  start = std::chrono::steady_clock::now();
  try {
    ext = check_theorem_ext(sc, cfg.tests);
  } catch (const Error& e) {
    ext.add({"extension check", false, e.what()});
  }
  double ext_ms = elapsed_ms(start);
  if (cache) save_operator_cache(*cache, hash, *sc.star);

  bool pass = ext.pass();
  for (const auto& c : suite) pass = pass && c.pass;
  res.pass = pass;
  res.exit_code = pass ? 0 : 1;
  rep["pass"] = pass;
  rep["checks"] = checks_json(suite);
  json ej = ext.to_json();
  ej["scenario_hash"] = hash;
  rep["extension"] = ej;
  rep["extras"] = sc.extras;
  if (opt.include_operators) {
    json ops = json::array();
    for (const auto& op : sc.frame_ops) ops.push_back(to_json(op));
    rep["operators"] = ops;
  }
  if (opt.include_timings) rep["timings"] = {{"build_ms", build_ms}, {"suite_ms", suite_ms}, {"extension_ms", ext_ms}};

  std::ostringstream out;
  out << cfg.name << " [" << sc.kind << ", R=" << cfg.order << "] " << (pass ? "PASS" : "FAIL") << "\n";
  for (const auto& c : suite) out << summary_line(c);
  for (const auto& c : ext.checks) out << summary_line(c);
  int bad = 0;
  for (const auto& c : ext.coefficients)
    if (!c.regular) {
      if (++bad <= 8) out << "  pole at " << c.location << " (order " << c.pole_order << ")\n";
    }
  if (bad > 8) out << "  ... " << bad - 8 << " more\n";
  res.summary = out.str();
  return res;
}

std::vector<RunResult> run_batch(const std::vector<RunConfig>& cfgs, const RunOptions& opt) {
  std::vector<std::future<RunResult>> jobs;
  jobs.reserve(cfgs.size());
  for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [&c, &opt] { return cmd_run(c, opt); }));
  std::vector<RunResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

RunResult cmd_check_extension(const RunConfig& cfg) {
  RunResult res;
  const std::string hash = config_hash(cfg);
  try {
    Scenario sc = build_scenario(cfg);
    ExtensionReport ext = check_theorem_ext(sc, cfg.tests);
    res.report = ext.to_json();
    res.pass = ext.pass();
    res.exit_code = res.pass ? 0 : 1;
    std::ostringstream out;
    for (const auto& c : ext.checks) out << summary_line(c);
    res.summary = out.str();
  } catch (const Error& e) {
    res.report = {{"pass", false}, {"error", e.what()}, {"checks", json::array()}, {"coefficients", json::array()}};
    res.exit_code = exit_code_for(e);
    res.summary = std::string("rejected: ") + e.what() + "\n";
  }
  res.report["scenario_hash"] = hash;
  return res;
}

std::string format_series(const FormalFunc& f) {
  std::string out;
  for (int r = 0; r <= f.order(); ++r) {
    const ExactScalar& c = f[r];
    if (c.is_zero()) continue;
    std::string piece;
    if (r == 0) {
      piece = c.to_string();
    } else {
      std::string nu = r == 1 ? "ν" : "ν^" + std::to_string(r);
      piece = c.is_one() ? nu : nu + "(" + c.to_string() + ")";
    }
    if (!out.empty()) out += " + ";
    out += piece;
  }
  return out.empty() ? "0" : out;
}

std::string cmd_star(const RunConfig& cfg, const std::string& f, const std::string& g) {
  Scenario sc = build_scenario(cfg);
  return format_series(sc.star->multiply(parse_scalar(f), parse_scalar(g)));
}

std::string cmd_berezin(const RunConfig& cfg, std::optional<int> probe_degree) {
  Scenario sc = build_scenario(cfg);
  return berezin_transform(*sc.star, probe_degree).to_string();
}

std::string cmd_op_root(int n, int order) {
  FormalAOp a = op_root(n, order);
  FormalAOp pw = power_A(a, static_cast<unsigned>(n + 1));
  FormalAOp s = build_S(n, order);
  std::string residual = "0";
  for (int r = 0; r <= order; ++r) {
    AOp d = pw[r] - s[r];
    if (!d.is_zero()) {
      residual = "ν^" + std::to_string(r) + ": " + d.to_string();
      break;
    }
  }
  if (residual != "0") throw Error("root residual is nonzero: " + residual);
  return "A = " + a.to_string() + "\nresidual: " + residual;
}

std::string cmd_op_divide(const std::string& b, int n, int r) {
  AOp bb = parse_aop(b);
  AOp a = op_divide(bb, r, n);
  Poly t0p = Poly::variable(generator(0)).pow(static_cast<unsigned>(n * (r + 1)));
  AOp d = division_operator(a, n) - t0p * bb;
  if (!d.is_zero()) throw Error("division residual is nonzero: " + d.to_string());
  return "A = " + a.to_string() + "\nresidual: 0";
}

}  // namespace starext
