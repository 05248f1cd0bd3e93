#include "verdalca/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "verdalca/errors.hpp"

namespace verdalca {

namespace {

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<std::pair<std::string_view, Enum>, N>& table,
                std::string_view what) {
    for (const auto& [name, value] : table) {
        if (name == text) return value;
    }
    throw ValidationError("invalid " + std::string(what) + " \"" + std::string(text) + "\"");
}

template <class Enum, std::size_t N>
std::string_view enum_name(Enum value, const std::array<std::pair<std::string_view, Enum>, N>& table) {
    for (const auto& [name, v] : table) {
        if (v == value) return name;
    }
    return "?";
}

constexpr std::array<std::pair<std::string_view, Compartment>, 4> kCompartments{{
    {"air", Compartment::air},
    {"water", Compartment::water},
    {"soil", Compartment::soil},
    {"resource", Compartment::resource},
}};
constexpr std::array<std::pair<std::string_view, Direction>, 2> kDirections{{
    {"input", Direction::input},
    {"output", Direction::output},
}};
constexpr std::array<std::pair<std::string_view, StageRole>, 5> kRoles{{
    {"feedstock", StageRole::feedstock},
    {"ethanol", StageRole::ethanol},
    {"meg", StageRole::meg},
    {"tpa", StageRole::tpa},
    {"pet", StageRole::pet},
}};
constexpr std::array<std::pair<std::string_view, Polymer>, 3> kPolymers{{
    {"pet30", Polymer::pet30},
    {"pet100", Polymer::pet100},
    {"fossil", Polymer::fossil},
}};
constexpr std::array<std::pair<std::string_view, TransportMode>, 3> kModes{{
    {"truck", TransportMode::truck},
    {"ship", TransportMode::ship},
    {"rail", TransportMode::rail},
}};
constexpr std::array<std::pair<std::string_view, AllocationMethod>, 3> kAllocations{{
    {"substitution", AllocationMethod::substitution},
    {"mass", AllocationMethod::mass},
    {"economic", AllocationMethod::economic},
}};
constexpr std::array<std::pair<std::string_view, ImpactCategoryKey>, 6> kCategories{{
    {"GWP", ImpactCategoryKey::GWP},
    {"WU", ImpactCategoryKey::WU},
    {"AE", ImpactCategoryKey::AE},
    {"ME", ImpactCategoryKey::ME},
    {"TA", ImpactCategoryKey::TA},
    {"CT", ImpactCategoryKey::CT},
}};

}  // namespace

Region Region::parse(std::string_view code) {
    const bool alpha2 = code.size() == 2 && std::all_of(code.begin(), code.end(), [](char c) {
                            return std::isupper(static_cast<unsigned char>(c)) != 0;
                        });
    if (!alpha2 && code != "GLO") {
        throw ValidationError("invalid region code \"" + std::string(code) +
                              "\" (expected ISO 3166-1 alpha-2 or GLO)");
    }
    return Region(std::string(code));
}

std::string_view to_string(Compartment v) { return enum_name(v, kCompartments); }
std::string_view to_string(Direction v) { return enum_name(v, kDirections); }
std::string_view to_string(StageRole v) { return enum_name(v, kRoles); }
std::string_view to_string(Polymer v) { return enum_name(v, kPolymers); }
std::string_view to_string(TransportMode v) { return enum_name(v, kModes); }
std::string_view to_string(AllocationMethod v) { return enum_name(v, kAllocations); }
std::string_view to_string(ImpactCategoryKey v) { return enum_name(v, kCategories); }

Compartment parse_compartment(std::string_view s) { return parse_enum(s, kCompartments, "compartment"); }
Direction parse_direction(std::string_view s) { return parse_enum(s, kDirections, "direction"); }
StageRole parse_stage_role(std::string_view s) { return parse_enum(s, kRoles, "stage role"); }
Polymer parse_polymer(std::string_view s) { return parse_enum(s, kPolymers, "polymer"); }
TransportMode parse_transport_mode(std::string_view s) { return parse_enum(s, kModes, "transport mode"); }
AllocationMethod parse_allocation(std::string_view s) {
    return parse_enum(s, kAllocations, "allocation method");
}

ImpactCategoryKey parse_category(std::string_view s) {
    for (const auto& [name, value] : kCategories) {
        if (name == s) return value;
    }
    throw UnknownCategoryError(std::string(s));
}

std::string_view uncertainty_kind(const UncertaintySpec& spec) {
    struct Visitor {
        std::string_view operator()(const FixedDist&) const { return "fixed"; }
        std::string_view operator()(const LognormalDist&) const { return "lognormal"; }
        std::string_view operator()(const NormalDist&) const { return "normal"; }
        std::string_view operator()(const UniformDist&) const { return "uniform"; }
        std::string_view operator()(const TriangularDist&) const { return "triangular"; }
    };
    return std::visit(Visitor{}, spec);
}

bool is_fixed(const UncertaintySpec& spec) { return std::holds_alternative<FixedDist>(spec); }

std::optional<std::string> check_uncertainty(const UncertaintySpec& spec, double base) {
    if (!std::isfinite(base)) return "base amount is not finite";
    if (const auto* ln = std::get_if<LognormalDist>(&spec)) {
        if (!(ln->gsd > 1.0) || !std::isfinite(ln->gsd)) return "lognormal gsd must be > 1";
        if (!(base > 0.0)) return "lognormal requires a strictly positive base amount";
    } else if (const auto* n = std::get_if<NormalDist>(&spec)) {
        if (!(n->sd >= 0.0) || !std::isfinite(n->sd)) return "normal sd must be >= 0";
    } else if (const auto* u = std::get_if<UniformDist>(&spec)) {
        if (!std::isfinite(u->lo) || !std::isfinite(u->hi) || u->lo > u->hi) {
            return "uniform requires finite lo <= hi";
        }
    } else if (const auto* t = std::get_if<TriangularDist>(&spec)) {
        if (!std::isfinite(t->lo) || !std::isfinite(t->mode) || !std::isfinite(t->hi) ||
            !(t->lo <= t->mode && t->mode <= t->hi)) {
            return "triangular requires finite lo <= mode <= hi";
        }
    }
    return std::nullopt;
}

std::string target_string(const ExchangeTarget& target) {
    if (const auto* f = std::get_if<FlowId>(&target)) return f->str();
    if (const auto* p = std::get_if<ProcessId>(&target)) return p->str();
    return "stage:" + std::string(to_string(std::get<StageRef>(target).role));
}

const Stage* ScenarioDefinition::stage(StageRole role) const {
    for (const auto& s : stages) {
        if (s.role == role) return &s;
    }
    return nullptr;
}

std::vector<StageRole> required_stages(Polymer polymer) {
    if (polymer == Polymer::fossil) return {StageRole::pet};
    return {StageRole::feedstock, StageRole::ethanol, StageRole::meg, StageRole::tpa, StageRole::pet};
}

double PolymerComposition::carbon_mass_fraction() const {
    constexpr double kCarbonMolarMass = 12.011;
    return repeat_unit_carbons * kCarbonMolarMass / repeat_unit_molar_mass;
}

}  // namespace verdalca
