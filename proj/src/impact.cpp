#include "verdalca/impact.hpp"

#include "verdalca/errors.hpp"

namespace verdalca {

ImpactMethod ImpactMethod::from_database(const ProcessDatabase& db) {
    ImpactMethod m;
    for (const auto& cat : db.impact_methods) {
        const std::size_t c = index_of(cat.key);
        m.present_[c] = true;
        m.units_[c] = cat.unit;
        m.names_[c] = cat.name;
        m.regionalized_[c] = cat.regionalized;
        for (const auto& f : cat.factors) {
            double value = f.factor;
            if (db.flow(f.flow).compartment == Compartment::resource) value = -value;
            const std::string region = f.region && !f.region->is_global() ? f.region->code() : std::string{};
            m.factors_[c][{f.flow.str(), region}] = value;
        }
    }
    return m;
}

std::optional<double> ImpactMethod::factor(ImpactCategoryKey key, const InventoryKey& row) const {
    const std::size_t c = index_of(key);
    const auto& table = factors_[c];
    if (regionalized_[c] && !row.region.empty()) {
        auto it = table.find({row.flow.str(), row.region});
        if (it != table.end()) return it->second;
    }
    auto it = table.find({row.flow.str(), std::string{}});
    if (it != table.end()) return it->second;
    return std::nullopt;
}

Characterization characterize(std::span<const InventoryKey> rows, const Eigen::VectorXd& g,
                              const ImpactMethod& method) {
    if (static_cast<std::size_t>(g.size()) != rows.size()) {
        throw ValidationError("inventory vector does not match its row keys");
    }
    Characterization out;
    std::vector<bool> covered(rows.size(), false);
    for (const auto key : kAllCategories) {
        double total = 0.0;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (const auto f = method.factor(key, rows[k])) {
                total += *f * g(static_cast<Eigen::Index>(k));
                covered[k] = true;
            }
        }
        out.values[index_of(key)] = total;
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double amount = g(static_cast<Eigen::Index>(k));
        if (!covered[k] && amount != 0.0) out.uncovered.push_back({rows[k], amount});
    }
    return out;
}

Eigen::MatrixXd characterization_matrix(std::span<const InventoryKey> rows, const ImpactMethod& method) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(kCategoryCount, static_cast<Eigen::Index>(rows.size()));
    for (const auto key : kAllCategories) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (const auto f = method.factor(key, rows[k])) {
                q(static_cast<Eigen::Index>(index_of(key)), static_cast<Eigen::Index>(k)) = *f;
            }
        }
    }
    return q;
}

std::vector<ProcessContribution> contributions(const TechnosphereSystem& sys, const InventorySolution& sol,
                                               const ImpactMethod& method, ImpactCategoryKey key) {
    if (!method.has(key)) throw UnknownCategoryError(std::string(to_string(key)));
    std::vector<double> q(sys.flows.size(), 0.0);
    for (std::size_t k = 0; k < sys.flows.size(); ++k) q[k] = method.factor(key, sys.flows[k]).value_or(0.0);

    std::vector<ProcessContribution> out(sys.size());
    double total = 0.0;
    for (Eigen::Index j = 0; j < sys.B.outerSize(); ++j) {
        double per_unit = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.B, j); it; ++it) {
            per_unit += q[static_cast<std::size_t>(it.row())] * it.value();
        }
        auto& c = out[static_cast<std::size_t>(j)];
        c.process = sys.processes[static_cast<std::size_t>(j)];
        c.value = per_unit * sol.s(j);
        total += c.value;
    }
    for (auto& c : out) c.fraction = total != 0.0 ? c.value / total : 0.0;
    return out;
}

std::vector<ProcessContribution> contributions(const TechnosphereSystem& sys, const InventorySolution& sol,
                                               const ImpactMethod& method, std::string_view category) {
    return contributions(sys, sol, method, parse_category(category));
}

// ---------------------------------------------------------------------------

std::string_view to_string(BiogenicBasis b) {
    return b == BiogenicBasis::stoichiometric ? "stoichiometric" : "reference_table";
}

BiogenicBasis parse_biogenic_basis(std::string_view s) {
    if (s == "stoichiometric") return BiogenicBasis::stoichiometric;
    if (s == "reference_table") return BiogenicBasis::reference_table;
    throw ValidationError("unknown biogenic basis \"" + std::string(s) + "\"");
}

double biogenic_credit(const PolymerComposition& comp, Polymer polymer) {
    int biobased = 0;
    switch (polymer) {
        case Polymer::fossil: return 0.0;
        case Polymer::pet30: biobased = comp.glycol_carbons; break;
        case Polymer::pet100: biobased = comp.glycol_carbons + comp.acid_carbons; break;
    }
    // Fully biobased credit first, so the 30% value is an exact fraction of it.
    const double all_carbon = comp.carbon_mass_fraction() * (kMolarMassCO2 / kMolarMassC);
    return static_cast<double>(biobased) / static_cast<double>(comp.repeat_unit_carbons) * all_carbon;
}

double biogenic_credit(const PolymerComposition& comp, Polymer polymer, BiogenicBasis basis) {
    if (basis == BiogenicBasis::reference_table) {
        if (polymer == Polymer::pet30 && comp.reference_credit_30) return *comp.reference_credit_30;
        if (polymer == Polymer::pet100 && comp.reference_credit_100) return *comp.reference_credit_100;
    }
    return biogenic_credit(comp, polymer);
}

double luc_emissions(const ScenarioDefinition& defn, std::span<const LucFactor> table) {
    if (defn.polymer == Polymer::fossil) return 0.0;
    for (const auto& f : table) {
        if (f.feedstock == defn.luc_feedstock_key) {
            return defn.polymer == Polymer::pet30 ? f.debit_30 : f.debit_100;
        }
    }
    throw ValidationError("scenario \"" + defn.id.str() + "\": unknown LUC feedstock key \"" +
                          defn.luc_feedstock_key + "\"");
}

CarbonLedger carbon_ledger(double process_ghg, double luc, double biogenic) {
    return CarbonLedger{process_ghg, luc, biogenic, process_ghg + luc - biogenic};
}

}  // namespace verdalca
