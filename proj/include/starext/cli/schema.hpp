#pragma once

#include <json.hpp>

#include <optional>
#include <string>

namespace starext {

/// First violation found while checking an instance against a schema.
struct SchemaViolation {
  std::string instance_path;  ///< JSON pointer into the instance, "" for the root
  std::string schema_path;    ///< "#/properties/..." into the schema
  std::string message;
};

/// Validates the keyword subset used by the published schemas: type, enum,
/// const, required, properties, additionalProperties, items, min/maxItems,
/// minLength, minimum, maximum, pattern-free strings, allOf and if/then.
std::optional<SchemaViolation> validate_against_schema(const nlohmann::json& instance, const nlohmann::json& schema);

/// The run-config schema compiled into the binary.
const nlohmann::json& run_config_schema();

}  // namespace starext
