#include "starext/cli/schema.hpp"

#include "run_config_schema.inc"

namespace starext {

namespace {

using nlohmann::json;

bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::optional<SchemaViolation> check(const json& v, const json& s, const std::string& ip, const std::string& sp) {
  auto fail = [&](const std::string& kw, std::string msg) {
    return SchemaViolation{ip, sp + "/" + kw, std::move(msg)};
  };
  if (s.is_boolean()) {
    if (!s.get<bool>()) return SchemaViolation{ip, sp, "no value is allowed here"};
    return std::nullopt;
  }
  if (s.contains("type")) {
    const json& t = s["type"];
    bool ok = false;
    if (t.is_string()) ok = has_type(v, t.get<std::string>());
    else
      for (const auto& e : t) ok = ok || has_type(v, e.get<std::string>());
    if (!ok) return fail("type", "expected " + t.dump());
  }
  if (s.contains("enum")) {
    bool ok = false;
    for (const auto& e : s["enum"]) ok = ok || e == v;
    if (!ok) return fail("enum", "value " + v.dump() + " not in " + s["enum"].dump());
  }
  if (s.contains("const") && s["const"] != v) return fail("const", "expected " + s["const"].dump());
  if (v.is_number()) {
    if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>())
      return fail("minimum", "value below " + s["minimum"].dump());
    if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>())
      return fail("maximum", "value above " + s["maximum"].dump());
  }
  if (v.is_string() && s.contains("minLength") && v.get<std::string>().size() < s["minLength"].get<std::size_t>())
    return fail("minLength", "string too short");
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) return fail("minItems", "too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) return fail("maxItems", "too many items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i)
        if (auto r = check(v[i], s["items"], ip + "/" + std::to_string(i), sp + "/items")) return r;
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!v.contains(k.get<std::string>()))
          return fail("required", "missing required property '" + k.get<std::string>() + "'");
    const json* props = s.contains("properties") ? &s["properties"] : nullptr;
    for (auto it = v.begin(); it != v.end(); ++it) {
      std::string child = ip + "/" + escape(it.key());
      if (props && props->contains(it.key())) {
        if (auto r = check(it.value(), (*props)[it.key()], child, sp + "/properties/" + escape(it.key()))) return r;
      } else if (s.contains("additionalProperties")) {
        const json& ap = s["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>())
          return SchemaViolation{child, sp + "/additionalProperties", "unexpected property '" + it.key() + "'"};
        if (ap.is_object())
          if (auto r = check(it.value(), ap, child, sp + "/additionalProperties")) return r;
      }
    }
  }
  if (s.contains("allOf"))
    for (std::size_t i = 0; i < s["allOf"].size(); ++i)
      if (auto r = check(v, s["allOf"][i], ip, sp + "/allOf/" + std::to_string(i))) return r;
  if (s.contains("if")) {
    bool cond = !check(v, s["if"], ip, sp + "/if");
    if (cond && s.contains("then"))
      if (auto r = check(v, s["then"], ip, sp + "/then")) return r;
    if (!cond && s.contains("else"))
      if (auto r = check(v, s["else"], ip, sp + "/else")) return r;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SchemaViolation> validate_against_schema(const json& instance, const json& schema) {
  return check(instance, schema, "", "#");
}

const json& run_config_schema() {
  static const json schema = json::parse(kRunConfigSchema);
  return schema;
}

}  // namespace starext
