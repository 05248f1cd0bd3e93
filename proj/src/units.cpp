#include "verdalca/units.hpp"

#include <array>
#include <string>
#include <utility>

#include "verdalca/errors.hpp"

namespace verdalca {

namespace {

struct UnitInfo {
    std::string_view name;
    Unit unit;
    Dimension dimension;
    double to_base;  // kg, m3, MJ, tkm
};

constexpr std::array<UnitInfo, 6> kRegistry{{
    {"kg", Unit::kg, Dimension::mass, 1.0},
    {"t", Unit::t, Dimension::mass, 1000.0},
    {"m3", Unit::m3, Dimension::volume, 1.0},
    {"MJ", Unit::MJ, Dimension::energy, 1.0},
    {"kWh", Unit::kWh, Dimension::energy, 3.6},
    {"tkm", Unit::tkm, Dimension::transport, 1.0},
}};

const UnitInfo& info(Unit u) {
    for (const auto& i : kRegistry) {
        if (i.unit == u) return i;
    }
    return kRegistry.front();
}

}  // namespace

std::string_view to_string(Unit u) { return info(u).name; }

Unit parse_unit(std::string_view text) {
    for (const auto& i : kRegistry) {
        if (i.name == text) return i.unit;
    }
    throw ValidationError("unit \"" + std::string(text) + "\" is not in the unit registry");
}

Dimension dimension_of(Unit u) { return info(u).dimension; }

std::optional<double> conversion_factor(Unit from, Unit to) {
    const auto& a = info(from);
    const auto& b = info(to);
    if (a.dimension != b.dimension) return std::nullopt;
    return a.to_base / b.to_base;
}

}  // namespace verdalca
