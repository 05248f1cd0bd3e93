#include "verdalca/evaluate.hpp"

#include "verdalca/errors.hpp"

namespace verdalca {

ScenarioModel::ScenarioModel(const ProcessDatabase& db, const ScenarioDefinition& defn, EvaluationOptions options)
    : graph_(resolve_scenario(defn, db, options.allocation)),
      options_(options),
      method_(ImpactMethod::from_database(db)),
      luc_(luc_emissions(defn, db.luc_factors)),
      biogenic_(defn.polymer == Polymer::fossil ? 0.0
                                                : biogenic_credit(db.composition(), defn.polymer, options.biogenic)) {
    for (std::size_t i = 0; i < graph_.nodes.size(); ++i) {
        const auto& p = graph_.nodes[i].source;
        // Name exchanges after the database entry so stage placeholders read
        // as written ("stage:meg"), which is what override paths match.
        auto paths = exchange_paths(p);
        if (auto it = db.processes.find(p.id); it != db.processes.end()) {
            const auto original = exchange_paths(it->second);
            std::copy(original.begin(), original.end(), paths.begin());
        }
        auto add = [&](std::string id, ParameterLocator loc) {
            const auto& spec = parameter_uncertainty(p, loc);
            if (is_fixed(spec)) return;
            parameters_.push_back(Parameter{std::move(id), i, loc, parameter_value(p, loc), spec, p.id});
        };
        for (std::size_t k = 0; k < p.exchanges.size(); ++k) add(paths[k], {ParameterKind::exchange, k});
        for (std::size_t k = 0; k < p.co_products.size(); ++k) {
            add(coproduct_path(p, k, ParameterKind::coproduct_mass), {ParameterKind::coproduct_mass, k});
            if (p.co_products[k].price_per_kg) {
                add(coproduct_path(p, k, ParameterKind::coproduct_price), {ParameterKind::coproduct_price, k});
            }
        }
        if (p.reference_product.price_per_kg) add(reference_price_path(p), {ParameterKind::reference_price, 0});
    }
}

std::vector<double> ScenarioModel::base_values() const {
    std::vector<double> v;
    v.reserve(parameters_.size());
    for (const auto& p : parameters_) v.push_back(p.base);
    return v;
}

ScenarioModel::Solved ScenarioModel::solve_with(std::span<const double> values,
                                                std::vector<std::string>* warnings) const {
    if (values.size() != parameters_.size()) {
        throw ValidationError("expected " + std::to_string(parameters_.size()) + " parameter values, got " +
                              std::to_string(values.size()));
    }
    Solved out;
    if (parameters_.empty()) {
        out.system = assemble(graph_);
    } else {
        std::vector<GraphNode> nodes = graph_.nodes;
        for (std::size_t k = 0; k < parameters_.size(); ++k) {
            const auto& prm = parameters_[k];
            set_parameter_value(nodes[prm.node].source, prm.locator, values[k]);
        }
        const auto allocated = allocate_nodes(nodes, options_.allocation, warnings);
        out.system = assemble(allocated, graph_.regionalized_flows);
    }
    const auto f = graph_.demand();
    out.solution = solve(out.system, Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size())));
    out.characterization = characterize(out.system.flows, out.solution.g, method_);
    return out;
}

RunResult ScenarioModel::finish(const Characterization& ch) const {
    RunResult r;
    r.inventory_impacts = ch.values;
    r.ledger = carbon_ledger(ch.values[index_of(ImpactCategoryKey::GWP)], luc_, biogenic_);
    r.impacts = ch.values;
    r.impacts[index_of(ImpactCategoryKey::GWP)] = r.ledger.net_ghg;
    return r;
}

RunResult ScenarioModel::evaluate() const {
    const auto base = base_values();
    return evaluate(base);
}

RunResult ScenarioModel::evaluate(std::span<const double> values) const {
    return finish(solve_with(values, nullptr).characterization);
}

Evaluation ScenarioModel::evaluate_detailed() const {
    Evaluation ev;
    ev.scenario = graph_.scenario;
    ev.options = options_;
    ev.warnings = graph_.warnings;
    auto solved = solve_with(base_values(), nullptr);
    ev.result = finish(solved.characterization);
    ev.uncovered = std::move(solved.characterization.uncovered);
    for (const auto key : kAllCategories) {
        if (method_.has(key)) {
            ev.contributions[index_of(key)] = contributions(solved.system, solved.solution, method_, key);
        }
    }
    for (const auto& node : graph_.nodes) ev.node_kinds.push_back(node.kind);
    ev.system = std::move(solved.system);
    ev.solution = std::move(solved.solution);
    return ev;
}

Evaluation evaluate_scenario(const ProcessDatabase& db, const ScenarioDefinition& defn, EvaluationOptions options) {
    return ScenarioModel(db, defn, options).evaluate_detailed();
}

}  // namespace verdalca
