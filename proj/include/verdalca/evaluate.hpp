#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "verdalca/database.hpp"
#include "verdalca/impact.hpp"
#include "verdalca/parameters.hpp"
#include "verdalca/scenario.hpp"
#include "verdalca/technosphere.hpp"

namespace verdalca {

struct EvaluationOptions {
    AllocationMethod allocation = AllocationMethod::substitution;
    BiogenicBasis biogenic = BiogenicBasis::stoichiometric;
};

/// One uncertain number of a resolved scenario.
struct Parameter {
    std::string id;  ///< parameter path, see parameters.hpp
    std::size_t node = 0;
    ParameterLocator locator;
    double base = 0.0;
    UncertaintySpec spec;
    ProcessId process;
};

/// Outcome of one evaluation. `impacts` is what reports show: its GWP entry
/// is the net GHG of the carbon ledger. `inventory_impacts` is the plain
/// characterized inventory (GWP there is the process GHG).
struct RunResult {
    ImpactVector impacts{};
    ImpactVector inventory_impacts{};
    CarbonLedger ledger;
};

struct Evaluation {
    ScenarioDefinition scenario;
    EvaluationOptions options;
    RunResult result;
    TechnosphereSystem system;
    InventorySolution solution;
    std::array<std::vector<ProcessContribution>, kCategoryCount> contributions;
    std::vector<UncoveredFlow> uncovered;
    std::vector<std::string> warnings;
    std::vector<NodeKind> node_kinds;  ///< aligned with system.processes
};

/// A scenario resolved once and re-evaluated many times with different
/// parameter values. Immutable after construction; evaluate() is thread-safe.
class ScenarioModel {
public:
    ScenarioModel(const ProcessDatabase& db, const ScenarioDefinition& defn, EvaluationOptions options = {});

    const ScenarioGraph& graph() const { return graph_; }
    const EvaluationOptions& options() const { return options_; }
    const ImpactMethod& method() const { return method_; }

    /// Every number with a non-fixed uncertainty, in node then exchange order.
    const std::vector<Parameter>& parameters() const { return parameters_; }
    std::vector<double> base_values() const;

    RunResult evaluate() const;
    /// One value per parameter, in parameters() order.
    RunResult evaluate(std::span<const double> values) const;

    Evaluation evaluate_detailed() const;

private:
    struct Solved {
        TechnosphereSystem system;
        InventorySolution solution;
        Characterization characterization;
    };
    Solved solve_with(std::span<const double> values, std::vector<std::string>* warnings) const;
    RunResult finish(const Characterization& ch) const;

    ScenarioGraph graph_;
    EvaluationOptions options_;
    ImpactMethod method_;
    std::vector<Parameter> parameters_;
    double luc_ = 0.0;
    double biogenic_ = 0.0;
};

Evaluation evaluate_scenario(const ProcessDatabase& db, const ScenarioDefinition& defn,
                             EvaluationOptions options = {});

}  // namespace verdalca
