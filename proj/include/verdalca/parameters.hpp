#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdalca/database.hpp"
#include "verdalca/types.hpp"

namespace verdalca {

// Parameter paths address one number inside a process dataset:
//   <process>/<target>[#k]              exchange (k-th exchange with that target, from 0)
//   <process>/co_products/<name>/mass   co-product mass per reference unit
//   <process>/co_products/<name>/price  co-product price
//   <process>/reference_product/price   reference product price
// Monte Carlo parameter ids and request overrides share this grammar.

enum class ParameterKind { exchange, coproduct_mass, coproduct_price, reference_price };

struct ParameterLocator {
    ParameterKind kind = ParameterKind::exchange;
    std::size_t index = 0;  ///< exchange or co-product index; unused for reference_price
};

/// Path of every exchange, in exchange order.
std::vector<std::string> exchange_paths(const ProcessDataset& p);
std::string coproduct_path(const ProcessDataset& p, std::size_t k, ParameterKind kind);
std::string reference_price_path(const ProcessDataset& p);

/// Splits "<process>/<rest>" and locates <rest> inside `p`. Throws
/// ValidationError naming the path when it does not address anything.
ParameterLocator locate(const ProcessDataset& p, const std::string& path);

double parameter_value(const ProcessDataset& p, const ParameterLocator& loc);
void set_parameter_value(ProcessDataset& p, const ParameterLocator& loc, double value);
const UncertaintySpec& parameter_uncertainty(const ProcessDataset& p, const ParameterLocator& loc);
void set_parameter_uncertainty(ProcessDataset& p, const ParameterLocator& loc, UncertaintySpec spec);

struct ParameterOverride {
    std::optional<double> amount;
    std::optional<UncertaintySpec> uncertainty;
    bool operator==(const ParameterOverride&) const = default;
};
using Overrides = std::map<std::string, ParameterOverride>;

/// Accepts {"path": number} or {"path": {"amount": x, "uncertainty": {...}}}.
Overrides overrides_from_json(const nlohmann::json& j);
nlohmann::json overrides_to_json(const Overrides& o);

/// Copy of `db` with the overrides written in. Every path must name an
/// existing process and number; the result is re-validated.
ProcessDatabase apply_overrides(const ProcessDatabase& db, const Overrides& overrides);

}  // namespace verdalca
