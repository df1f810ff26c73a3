#include "starext/diffop/json.hpp"

#include "starext/errors.hpp"
#include "starext/scalar/parse.hpp"

namespace starext {

nlohmann::json to_json(const DiffOp& op, int nu_power) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [alpha, c] : op.terms())
    terms.push_back({{"dz_multi_index", alpha.dz(op.chart().n)},
                     {"dzbar_multi_index", alpha.dzbar(op.chart().n)},
                     {"coeff_text", c.to_string()}});
  return {{"nu_power", nu_power}, {"terms", terms}};
}

nlohmann::json to_json(const FormalOp& op) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = 0; r <= op.order(); ++r)
    if (!op[r].is_zero()) out.push_back(to_json(op[r], r));
  return out;
}

FormalOp formal_op_from_json(const nlohmann::json& j, Chart chart, int order) {
  if (!j.is_array()) throw ConfigError("operator JSON must be an array");
  FormalOp op(chart, order);
  for (const auto& comp : j) {
    int r = comp.at("nu_power").get<int>();
    if (r < 0 || r > order) throw ConfigError("nu_power " + std::to_string(r) + " out of range");
    for (const auto& t : comp.at("terms")) {
      auto dz = t.at("dz_multi_index").get<std::vector<int>>();
      auto dzb = t.at("dzbar_multi_index").get<std::vector<int>>();
      if (static_cast<int>(dz.size()) != chart.n || static_cast<int>(dzb.size()) != chart.n)
        throw ChartMismatch("multi-index length does not match the chart");
      op[r].add_term(DerivIndex::holomorphic(dz) + DerivIndex::antiholomorphic(dzb),
                     parse_scalar(t.at("coeff_text").get<std::string>(), true));
    }
  }
  return op;
}

nlohmann::json to_json(const FormalFunc& f) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = 0; r <= f.order(); ++r)
    if (!f[r].is_zero()) out.push_back({{"nu_power", r}, {"coeff_text", f[r].to_string()}});
  return out;
}

FormalFunc formal_func_from_json(const nlohmann::json& j, int order) {
  FormalFunc f(order);
  for (const auto& c : j) {
    int r = c.at("nu_power").get<int>();
    if (r < 0 || r > order) throw ConfigError("nu_power " + std::to_string(r) + " out of range");
    f[r] = parse_scalar(c.at("coeff_text").get<std::string>(), true);
  }
  return f;
}

}  // namespace starext
