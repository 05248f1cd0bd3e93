#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "verdalca/units.hpp"

namespace verdalca {

/// Opaque identifier with a tag so flow, process and scenario ids cannot be mixed up.
template <class Tag>
class StrongId {
public:
    StrongId() = default;
    explicit StrongId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    auto operator<=>(const StrongId&) const = default;
    bool operator==(const StrongId&) const = default;

private:
    std::string value_;
};

using FlowId = StrongId<struct FlowIdTag>;
using ProcessId = StrongId<struct ProcessIdTag>;
using ScenarioId = StrongId<struct ScenarioIdTag>;

/// ISO 3166-1 alpha-2 code, or "GLO" for global datasets.
class Region {
public:
    Region() : code_("GLO") {}
    static Region parse(std::string_view code);  // throws ValidationError
    static Region global() { return Region{}; }

    const std::string& code() const noexcept { return code_; }
    bool is_global() const noexcept { return code_ == "GLO"; }

    auto operator<=>(const Region&) const = default;
    bool operator==(const Region&) const = default;

private:
    explicit Region(std::string code) : code_(std::move(code)) {}
    std::string code_;
};

enum class Compartment { air, water, soil, resource };
enum class Direction { input, output };
enum class StageRole { feedstock, ethanol, meg, tpa, pet };
enum class Polymer { pet30, pet100, fossil };
enum class TransportMode { truck, ship, rail };
enum class AllocationMethod { substitution, mass, economic };

/// The six midpoint categories. The order is the column order of every
/// ImpactVector and of Monte Carlo output matrices.
enum class ImpactCategoryKey { GWP, WU, AE, ME, TA, CT };
inline constexpr std::size_t kCategoryCount = 6;
inline constexpr std::array<ImpactCategoryKey, kCategoryCount> kAllCategories{
    ImpactCategoryKey::GWP, ImpactCategoryKey::WU, ImpactCategoryKey::AE,
    ImpactCategoryKey::ME,  ImpactCategoryKey::TA, ImpactCategoryKey::CT};

std::string_view to_string(Compartment);
std::string_view to_string(Direction);
std::string_view to_string(StageRole);
std::string_view to_string(Polymer);
std::string_view to_string(TransportMode);
std::string_view to_string(AllocationMethod);
std::string_view to_string(ImpactCategoryKey);

// Parsers throw ValidationError naming the offending text.
Compartment parse_compartment(std::string_view);
Direction parse_direction(std::string_view);
StageRole parse_stage_role(std::string_view);
Polymer parse_polymer(std::string_view);
TransportMode parse_transport_mode(std::string_view);
AllocationMethod parse_allocation(std::string_view);
ImpactCategoryKey parse_category(std::string_view);  // throws UnknownCategoryError

inline std::size_t index_of(ImpactCategoryKey key) { return static_cast<std::size_t>(key); }

// ---------------------------------------------------------------------------
// Uncertainty

struct FixedDist {
    bool operator==(const FixedDist&) const = default;
};
/// Geometric mean is the exchange's base amount.
struct LognormalDist {
    double gsd = 1.0;
    bool operator==(const LognormalDist&) const = default;
};
struct NormalDist {
    double sd = 0.0;
    bool operator==(const NormalDist&) const = default;
};
struct UniformDist {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const UniformDist&) const = default;
};
struct TriangularDist {
    double lo = 0.0;
    double mode = 0.0;
    double hi = 0.0;
    bool operator==(const TriangularDist&) const = default;
};

using UncertaintySpec =
    std::variant<FixedDist, LognormalDist, NormalDist, UniformDist, TriangularDist>;

std::string_view uncertainty_kind(const UncertaintySpec&);
bool is_fixed(const UncertaintySpec&);

/// Empty when the distribution is usable with the given base amount, otherwise the reason.
std::optional<std::string> check_uncertainty(const UncertaintySpec&, double base_amount);

// ---------------------------------------------------------------------------
// Core-model records

struct ElementaryFlow {
    FlowId id;
    std::string name;
    Compartment compartment = Compartment::air;
    Unit unit = Unit::kg;
    bool operator==(const ElementaryFlow&) const = default;
};

/// Placeholder bound to a scenario's stage process during resolution.
struct StageRef {
    StageRole role = StageRole::feedstock;
    bool operator==(const StageRef&) const = default;
};

using ExchangeTarget = std::variant<FlowId, ProcessId, StageRef>;

std::string target_string(const ExchangeTarget&);

struct Exchange {
    ExchangeTarget target;
    double amount = 0.0;
    Direction direction = Direction::input;
    UncertaintySpec uncertainty = FixedDist{};
    bool operator==(const Exchange&) const = default;

    bool is_technosphere() const { return !std::holds_alternative<FlowId>(target); }
};

struct ReferenceProduct {
    std::string name;
    Unit unit = Unit::kg;
    double amount = 1.0;
    std::optional<double> price_per_kg;
    UncertaintySpec price_uncertainty = FixedDist{};
    bool operator==(const ReferenceProduct&) const = default;
};

struct CoProduct {
    std::string name;
    double mass_per_ref_unit = 0.0;
    std::optional<double> price_per_kg;
    std::optional<ProcessId> substitute_process;
    UncertaintySpec mass_uncertainty = FixedDist{};
    UncertaintySpec price_uncertainty = FixedDist{};
    bool operator==(const CoProduct&) const = default;
};

struct ProcessDataset {
    ProcessId id;
    std::string name;
    Region location;
    ReferenceProduct reference_product;
    std::vector<Exchange> exchanges;
    std::vector<CoProduct> co_products;
    bool calibrated = false;
    std::string notes;
    bool operator==(const ProcessDataset&) const = default;
};

struct TransportLink {
    StageRole from = StageRole::feedstock;
    StageRole to = StageRole::ethanol;
    TransportMode mode = TransportMode::truck;
    double distance_km = 0.0;
    double payload = 1.0;  ///< kg moved per kg of the downstream stage's product
    bool operator==(const TransportLink&) const = default;
};

struct Stage {
    StageRole role = StageRole::pet;
    ProcessId process;
    Region location;
    bool operator==(const Stage&) const = default;
};

struct ScenarioDefinition {
    ScenarioId id;
    std::string name;
    Polymer polymer = Polymer::fossil;
    std::vector<Stage> stages;
    std::vector<TransportLink> transport;
    std::string luc_feedstock_key;
    std::string notes;
    bool operator==(const ScenarioDefinition&) const = default;

    const Stage* stage(StageRole role) const;
};

/// Stage roles a scenario must bind for its polymer.
std::vector<StageRole> required_stages(Polymer);

struct CharacterizationFactor {
    FlowId flow;
    std::optional<Region> region;  ///< empty = applies everywhere
    double factor = 0.0;
    bool operator==(const CharacterizationFactor&) const = default;
};

struct ImpactCategory {
    ImpactCategoryKey key = ImpactCategoryKey::GWP;
    std::string name;
    std::string unit;
    bool regionalized = false;
    std::vector<CharacterizationFactor> factors;
    bool operator==(const ImpactCategory&) const = default;
};

struct LucFactor {
    std::string feedstock;
    double debit_30 = 0.0;   ///< kg CO2-eq per kg PET, 30% biobased
    double debit_100 = 0.0;  ///< kg CO2-eq per kg PET, 100% biobased
    bool operator==(const LucFactor&) const = default;
};

struct PolymerComposition {
    std::string id;
    int repeat_unit_carbons = 10;
    int glycol_carbons = 2;
    int acid_carbons = 8;
    double repeat_unit_molar_mass = 192.17;  ///< g/mol
    std::optional<double> reference_credit_30;
    std::optional<double> reference_credit_100;
    bool operator==(const PolymerComposition&) const = default;

    double carbon_mass_fraction() const;
};

/// Per functional unit, indexed by ImpactCategoryKey.
using ImpactVector = std::array<double, kCategoryCount>;

}  // namespace verdalca

template <class Tag>
struct std::hash<verdalca::StrongId<Tag>> {
    std::size_t operator()(const verdalca::StrongId<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
