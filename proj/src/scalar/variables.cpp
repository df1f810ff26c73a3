#include "starext/scalar/variables.hpp"

#include <charconv>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "starext/errors.hpp"

namespace starext {
namespace {

struct AuxTable {
  std::mutex mu;
  std::vector<std::string> names;
  std::unordered_map<std::string, Var> ids;
};

AuxTable& aux_table() {
  static AuxTable table;
  return table;
}

bool parse_index(std::string_view digits, int& out) {
  if (digits.empty() || (digits.size() > 1 && digits[0] == '0')) return false;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

}  // namespace

Var holo(int k) {
  if (k < 1 || k > kMaxChartDim) throw SizeLimit("holomorphic index out of range: " + std::to_string(k));
  return static_cast<Var>(2 * (k - 1));
}

Var antiholo(int k) {
  if (k < 1 || k > kMaxChartDim) throw SizeLimit("antiholomorphic index out of range: " + std::to_string(k));
  return static_cast<Var>(2 * (k - 1) + 1);
}

Var generator(int k) {
  if (k < 0 || k > kMaxGenerator) throw SizeLimit("generator index out of range: " + std::to_string(k));
  return static_cast<Var>(kFirstGenerator + k);
}

Var auxiliary(std::string_view name) {
  auto& t = aux_table();
  std::lock_guard lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  Var id = static_cast<Var>(kFirstAuxiliary + t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

VarKind kind_of(Var v) {
  if (v < kFirstGenerator) return (v % 2 == 0) ? VarKind::Holomorphic : VarKind::Antiholomorphic;
  if (v < kFirstAuxiliary) return VarKind::AlgebraGenerator;
  return VarKind::Auxiliary;
}

int index_of(Var v) {
  switch (kind_of(v)) {
    case VarKind::Holomorphic:
    case VarKind::Antiholomorphic:
      return v / 2 + 1;
    case VarKind::AlgebraGenerator:
      return v - kFirstGenerator;
    case VarKind::Auxiliary:
      return v - kFirstAuxiliary;
  }
  return -1;
}

std::string name_of(Var v) {
  switch (kind_of(v)) {
    case VarKind::Holomorphic:
      return "z" + std::to_string(index_of(v));
    case VarKind::Antiholomorphic:
      return "zb" + std::to_string(index_of(v));
    case VarKind::AlgebraGenerator:
      return "t" + std::to_string(index_of(v));
    case VarKind::Auxiliary: {
      auto& t = aux_table();
      std::lock_guard lock(t.mu);
      return t.names.at(static_cast<std::size_t>(index_of(v)));
    }
  }
  return "?";
}

bool lookup_variable(std::string_view name, Var& out, bool intern_unknown) {
  int k = 0;
  if (name.size() > 2 && name.substr(0, 2) == "zb" && parse_index(name.substr(2), k)) {
    if (k < 1 || k > kMaxChartDim) return false;
    out = antiholo(k);
    return true;
  }
  if (name.size() > 1 && name[0] == 'z' && parse_index(name.substr(1), k)) {
    if (k < 1 || k > kMaxChartDim) return false;
    out = holo(k);
    return true;
  }
  if (name.size() > 1 && name[0] == 't' && parse_index(name.substr(1), k)) {
    if (k > kMaxGenerator) return false;
    out = generator(k);
    return true;
  }
  auto& t = aux_table();
  {
    std::lock_guard lock(t.mu);
    auto it = t.ids.find(std::string(name));
    if (it != t.ids.end()) {
      out = it->second;
      return true;
    }
  }
  if (!intern_unknown) return false;
  out = auxiliary(name);
  return true;
}

}  // namespace starext
