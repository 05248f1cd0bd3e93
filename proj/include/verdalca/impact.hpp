#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verdalca/database.hpp"
#include "verdalca/technosphere.hpp"
#include "verdalca/types.hpp"

namespace verdalca {

/// The six midpoint categories with their factors, indexed for lookup.
/// Resource-compartment factors are stored per unit extracted; since
/// extraction is a negative entry of B, they are negated here.
class ImpactMethod {
public:
    ImpactMethod() = default;
    static ImpactMethod from_database(const ProcessDatabase& db);

    bool has(ImpactCategoryKey key) const { return present_[index_of(key)]; }
    const std::string& unit(ImpactCategoryKey key) const { return units_[index_of(key)]; }
    const std::string& name(ImpactCategoryKey key) const { return names_[index_of(key)]; }

    /// Signed factor applied to an inventory entry, or empty if the flow is
    /// not characterized in that category. Regional factors fall back to the
    /// flow's global factor.
    std::optional<double> factor(ImpactCategoryKey key, const InventoryKey& row) const;

private:
    std::array<bool, kCategoryCount> present_{};
    std::array<std::string, kCategoryCount> units_;
    std::array<std::string, kCategoryCount> names_;
    std::array<bool, kCategoryCount> regionalized_{};
    // (flow, region) -> factor; region "" means no region given.
    std::array<std::map<std::pair<std::string, std::string>, double>, kCategoryCount> factors_;
};

/// An inventory row with no factor in any category of the method.
struct UncoveredFlow {
    InventoryKey flow;
    double amount = 0.0;
};

struct Characterization {
    ImpactVector values{};
    std::vector<UncoveredFlow> uncovered;  ///< nonzero flows without a factor
};

/// value_c = sum over rows of factor_c(row) * g(row). Factorless flows count zero.
Characterization characterize(std::span<const InventoryKey> rows, const Eigen::VectorXd& g,
                              const ImpactMethod& method);

/// Dense 6 x rows factor matrix (zero where a flow is uncharacterized).
Eigen::MatrixXd characterization_matrix(std::span<const InventoryKey> rows, const ImpactMethod& method);

struct ProcessContribution {
    ProcessId process;
    double value = 0.0;     ///< category units per functional unit, signed
    double fraction = 0.0;  ///< value / total (0 when the total is 0)
};

/// Per-process impact Q (B_j s_j), in system column order. Values sum to
/// the characterized total.
std::vector<ProcessContribution> contributions(const TechnosphereSystem& sys, const InventorySolution& sol,
                                               const ImpactMethod& method, ImpactCategoryKey key);
std::vector<ProcessContribution> contributions(const TechnosphereSystem& sys, const InventorySolution& sol,
                                               const ImpactMethod& method, std::string_view category);

// ---------------------------------------------------------------------------
// Carbon accounting

inline constexpr double kMolarMassC = 12.011;
inline constexpr double kMolarMassCO2 = 44.009;

struct CarbonLedger {
    double process_ghg = 0.0;
    double luc_ghg = 0.0;
    double biogenic_credit = 0.0;
    double net_ghg = 0.0;
    bool operator==(const CarbonLedger&) const = default;
};

enum class BiogenicBasis { stoichiometric, reference_table };
std::string_view to_string(BiogenicBasis);
BiogenicBasis parse_biogenic_basis(std::string_view);

/// kg CO2 taken up per kg PET from the biobased carbon of the polymer:
/// (biobased C / repeat-unit C) * carbon mass fraction * 44.009/12.011.
double biogenic_credit(const PolymerComposition& comp, Polymer polymer);

/// The composition's pinned reference credit when present, else stoichiometry.
double biogenic_credit(const PolymerComposition& comp, Polymer polymer, BiogenicBasis basis);

/// Land-use-change debit for the scenario's feedstock and polymer.
/// Fossil scenarios return 0; an unknown feedstock key throws ValidationError.
double luc_emissions(const ScenarioDefinition& defn, std::span<const LucFactor> table);

CarbonLedger carbon_ledger(double process_ghg, double luc, double biogenic);

}  // namespace verdalca
