#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace verdalca::schema {

/// Validator for the subset of JSON Schema (2020-12) used by the shipped
/// database schema: type, enum, const, properties, required,
/// additionalProperties, items, minItems, minimum, exclusiveMinimum, maximum,
/// pattern, oneOf, allOf and local "#/$defs/..." references.
class Validator {
public:
    explicit Validator(nlohmann::json schema);

    /// One message per violation, each prefixed with the instance JSON pointer.
    std::vector<std::string> validate(const nlohmann::json& instance) const;

private:
    void check(const nlohmann::json& schema, const nlohmann::json& instance, const std::string& path,
               std::vector<std::string>& errors) const;
    const nlohmann::json& resolve(const nlohmann::json& schema) const;

    nlohmann::json root_;
};

/// The database schema compiled into the library (data/schema/database.schema.json).
const nlohmann::json& database_schema();

}  // namespace verdalca::schema
