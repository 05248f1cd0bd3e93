#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "verdalca/database.hpp"
#include "verdalca/types.hpp"

namespace verdalca {

enum class NodeKind { stage, transport, background };
std::string_view to_string(NodeKind);

struct GraphNode {
    /// Dataset before allocation, with stage placeholders bound and the
    /// location set to the stage's location.
    ProcessDataset source;
    NodeKind kind = NodeKind::background;
    std::optional<StageRole> role;
};

/// `consumer` takes `amount` units of `supplier`'s product per unit of its own.
struct ProductEdge {
    std::size_t supplier = 0;
    std::size_t consumer = 0;
    double amount = 0.0;
};

/// A scenario resolved against a database. Stage nodes come first in
/// scenario order, then one transport node per link, then the background
/// processes the chain draws on (including substitutes under substitution).
struct ScenarioGraph {
    ScenarioDefinition scenario;
    AllocationMethod allocation = AllocationMethod::substitution;
    std::vector<GraphNode> nodes;
    std::vector<ProcessDataset> allocated;  ///< one single-output dataset per node, same order
    std::vector<ProductEdge> edges;
    std::size_t demand_node = 0;
    double demand_amount = 1.0;  ///< kg PET
    std::set<FlowId> regionalized_flows;
    std::vector<std::string> warnings;

    std::size_t size() const { return nodes.size(); }
    std::optional<std::size_t> find(const ProcessId& id) const;
    std::vector<double> demand() const;
};

ScenarioGraph resolve_scenario(const ScenarioDefinition& defn, const ProcessDatabase& db,
                               AllocationMethod method);

/// Applies allocation to every node and keeps the child that carries the
/// node's own product. Used at resolution and again for every Monte Carlo draw.
std::vector<ProcessDataset> allocate_nodes(std::span<const GraphNode> nodes, AllocationMethod method,
                                           std::vector<std::string>* warnings = nullptr);

/// Product edges between allocated nodes; throws ValidationError on a cycle.
std::vector<ProductEdge> product_edges(std::span<const ProcessDataset> allocated);

std::string transport_node_id(StageRole from, StageRole to);

}  // namespace verdalca
