#pragma once

#include <json.hpp>

#include "starext/diffop/diffop.hpp"

namespace starext {

/// [{nu_power, terms: [{dz_multi_index, dzbar_multi_index, coeff_text}]}, ...]
nlohmann::json to_json(const FormalOp& op);
nlohmann::json to_json(const DiffOp& op, int nu_power = 0);
FormalOp formal_op_from_json(const nlohmann::json& j, Chart chart, int order);

nlohmann::json to_json(const FormalFunc& f);
FormalFunc formal_func_from_json(const nlohmann::json& j, int order);

}  // namespace starext
