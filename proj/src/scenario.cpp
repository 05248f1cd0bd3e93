#include "verdalca/scenario.hpp"

#include <deque>
#include <map>
#include <unordered_map>

#include "verdalca/allocation.hpp"
#include "verdalca/errors.hpp"

namespace verdalca {

std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::stage: return "stage";
        case NodeKind::transport: return "transport";
        case NodeKind::background: return "background";
    }
    return "?";
}

std::string transport_node_id(StageRole from, StageRole to) {
    return "transport:" + std::string(to_string(from)) + "-" + std::string(to_string(to));
}

std::optional<std::size_t> ScenarioGraph::find(const ProcessId& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].source.id == id) return i;
    }
    return std::nullopt;
}

std::vector<double> ScenarioGraph::demand() const {
    std::vector<double> f(nodes.size(), 0.0);
    f.at(demand_node) = demand_amount;
    return f;
}

std::vector<ProcessDataset> allocate_nodes(std::span<const GraphNode> nodes, AllocationMethod method,
                                           std::vector<std::string>* warnings) {
    std::vector<ProcessDataset> out;
    out.reserve(nodes.size());
    for (const auto& node : nodes) {
        auto result = apply_allocation(node.source, method);
        if (warnings) warnings->insert(warnings->end(), result.warnings.begin(), result.warnings.end());
        out.push_back(std::move(result.processes.front()));
    }
    return out;
}

std::vector<ProductEdge> product_edges(std::span<const ProcessDataset> allocated) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < allocated.size(); ++i) index.emplace(allocated[i].id.str(), i);

    std::vector<ProductEdge> edges;
    std::vector<std::vector<std::size_t>> suppliers(allocated.size());
    for (std::size_t j = 0; j < allocated.size(); ++j) {
        for (const auto& e : allocated[j].exchanges) {
            const auto* pid = std::get_if<ProcessId>(&e.target);
            if (!pid) continue;
            auto it = index.find(pid->str());
            if (it == index.end()) {
                throw ReferenceError(pid->str(), "process \"" + allocated[j].id.str() + "\" (not in graph)");
            }
            const double signed_amount = e.direction == Direction::input ? e.amount : -e.amount;
            edges.push_back({it->second, j, signed_amount});
            suppliers[j].push_back(it->second);
        }
    }

    // Iterative three-colour DFS for cycles.
    std::vector<int> state(allocated.size(), 0);
    for (std::size_t root = 0; root < allocated.size(); ++root) {
        if (state[root] != 0) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next < suppliers[v].size()) {
                const std::size_t w = suppliers[v][next++];
                if (state[w] == 1) {
                    throw ValidationError("supply chain contains a cycle through process \"" +
                                          allocated[w].id.str() + "\"");
                }
                if (state[w] == 0) {
                    state[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                state[v] = 2;
                stack.pop_back();
            }
        }
    }
    return edges;
}

namespace {

void bind_stages(ProcessDataset& p, const ScenarioDefinition& defn) {
    for (auto& e : p.exchanges) {
        const auto* ref = std::get_if<StageRef>(&e.target);
        if (!ref) continue;
        const Stage* stage = defn.stage(ref->role);
        if (!stage) {
            throw ValidationError("scenario \"" + defn.id.str() + "\": missing stage \"" +
                                  std::string(to_string(ref->role)) + "\" required by process \"" +
                                  p.id.str() + "\"");
        }
        e.target = stage->process;
    }
}

}  // namespace

ScenarioGraph resolve_scenario(const ScenarioDefinition& defn, const ProcessDatabase& db,
                               AllocationMethod method) {
    validate_scenario(defn, db);

    ScenarioGraph g;
    g.scenario = defn;
    g.allocation = method;
    g.regionalized_flows = db.regionalized_flows();

    std::unordered_map<std::string, std::size_t> index;
    auto add_node = [&](ProcessDataset p, NodeKind kind, std::optional<StageRole> role) {
        bind_stages(p, defn);
        if (!index.emplace(p.id.str(), g.nodes.size()).second) {
            throw ValidationError("scenario \"" + defn.id.str() + "\": process \"" + p.id.str() +
                                  "\" is bound to more than one stage");
        }
        g.nodes.push_back(GraphNode{std::move(p), kind, role});
    };

    std::map<StageRole, std::size_t> stage_node;
    for (const auto& s : defn.stages) {
        ProcessDataset p = db.process(s.process);
        p.location = s.location;
        stage_node[s.role] = g.nodes.size();
        add_node(std::move(p), NodeKind::stage, s.role);
    }

    for (const auto& link : defn.transport) {
        const std::size_t downstream = stage_node.at(link.to);
        const Stage* to = defn.stage(link.to);
        ProcessDataset t;
        t.id = ProcessId(transport_node_id(link.from, link.to));
        t.name = "Transport " + std::string(to_string(link.from)) + " to " + std::string(to_string(link.to)) +
                 " by " + std::string(to_string(link.mode));
        t.location = to->location;
        t.reference_product = ReferenceProduct{"delivery per kg " + std::string(to_string(link.to)) + " product",
                                               Unit::kg, 1.0, std::nullopt, FixedDist{}};
        Exchange haul;
        haul.target = ProcessId(transport_process_name(link.mode));
        haul.amount = link.payload * link.distance_km / 1000.0;
        haul.direction = Direction::input;
        t.exchanges.push_back(std::move(haul));

        Exchange use;
        use.target = t.id;
        use.amount = 1.0;
        use.direction = Direction::input;
        g.nodes[downstream].source.exchanges.push_back(std::move(use));

        add_node(std::move(t), NodeKind::transport, std::nullopt);
    }

    // Background closure over the allocated datasets, so substitutes are
    // pulled in only when the method actually uses them.
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) queue.push_back(i);
    std::vector<ProcessDataset> allocated(g.nodes.size());
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        auto result = apply_allocation(g.nodes[i].source, method);
        g.warnings.insert(g.warnings.end(), result.warnings.begin(), result.warnings.end());
        std::vector<ProcessId> fresh;
        for (const auto& e : result.processes.front().exchanges) {
            const auto* pid = std::get_if<ProcessId>(&e.target);
            if (pid && !index.count(pid->str())) fresh.push_back(*pid);
        }
        allocated[i] = std::move(result.processes.front());
        for (const auto& pid : fresh) {
            if (index.count(pid.str())) continue;
            queue.push_back(g.nodes.size());
            add_node(db.process(pid), NodeKind::background, std::nullopt);
            allocated.emplace_back();
        }
    }
    g.allocated = std::move(allocated);
    g.edges = product_edges(g.allocated);

    const auto pet = stage_node.find(StageRole::pet);
    if (pet == stage_node.end()) {
        throw ValidationError("scenario \"" + defn.id.str() + "\": missing stage \"pet\"");
    }
    g.demand_node = pet->second;
    return g;
}

}  // namespace verdalca
