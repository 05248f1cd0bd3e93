#pragma once

#include <optional>
#include <string_view>

namespace verdalca {

/// Closed unit registry. Anything else is rejected at load time.
enum class Unit { kg, t, m3, MJ, kWh, tkm };

enum class Dimension { mass, volume, energy, transport };

std::string_view to_string(Unit);
Unit parse_unit(std::string_view);  // throws ValidationError
Dimension dimension_of(Unit);

/// Factor f such that 1 `from` = f `to`; empty when the units are not
/// interconvertible. Only kg<->t and MJ<->kWh are known.
std::optional<double> conversion_factor(Unit from, Unit to);

inline bool is_mass(Unit u) { return dimension_of(u) == Dimension::mass; }

}  // namespace verdalca
