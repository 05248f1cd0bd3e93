#include <doctest.h>

#include "support/bundled.hpp"
#include "verdalca/errors.hpp"
#include "verdalca/scenario.hpp"

using namespace verdalca;

namespace {

std::size_t count_kind(const ScenarioGraph& g, NodeKind kind) {
    std::size_t n = 0;
    for (const auto& node : g.nodes) n += node.kind == kind;
    return n;
}

}  // namespace

TEST_CASE("Sc.1 resolves to five stages plus transport nodes") {
    const auto& db = testing::bundled().db;
    const auto g = resolve_scenario(db.scenario("Sc.1"), db, AllocationMethod::substitution);
    CHECK(count_kind(g, NodeKind::stage) == 5);
    CHECK(count_kind(g, NodeKind::transport) == g.scenario.transport.size());
    for (std::size_t i = 0; i < 5; ++i) CHECK(g.nodes[i].kind == NodeKind::stage);
    CHECK(g.nodes[g.demand_node].role == StageRole::pet);
    CHECK(g.nodes[2].source.location.code() == "IN");
    CHECK(g.nodes[g.demand_node].source.location.code() == "TH");
    CHECK(g.nodes[5].source.id.str() == transport_node_id(StageRole::feedstock, StageRole::ethanol));
}

TEST_CASE("fossil reference is a single node") {
    const auto& db = testing::bundled().db;
    const auto g = resolve_scenario(db.scenario("fossil"), db, AllocationMethod::substitution);
    CHECK(g.size() == 1);
    CHECK(g.demand_amount == 1.0);
}

TEST_CASE("Sc.10 binds the biobased TPA process") {
    const auto& db = testing::bundled().db;
    const auto g = resolve_scenario(db.scenario("Sc.10"), db, AllocationMethod::substitution);
    const auto* tpa = g.scenario.stage(StageRole::tpa);
    REQUIRE(tpa);
    CHECK(tpa->process.str() == "tpa_bio_nl");
    CHECK(g.find(ProcessId("tpa_bio_nl")).has_value());
    CHECK_FALSE(g.find(ProcessId("tpa_fossil_glo")).has_value());
}

TEST_CASE("every bundled graph is acyclic with a single 1 kg demand") {
    const auto& db = testing::bundled().db;
    for (const auto& s : db.scenarios) {
        for (auto m : {AllocationMethod::substitution, AllocationMethod::mass, AllocationMethod::economic}) {
            const auto g = resolve_scenario(s, db, m);
            const auto f = g.demand();
            std::size_t nonzero = 0;
            for (double v : f) {
                if (v != 0.0) {
                    ++nonzero;
                    CHECK(v == 1.0);
                }
            }
            CHECK(nonzero == 1);
            CHECK_NOTHROW(product_edges(g.allocated));
        }
    }
}

TEST_CASE("substitutes only enter the graph under substitution") {
    const auto& db = testing::bundled().db;
    const auto sub = resolve_scenario(db.scenario("Sc.4"), db, AllocationMethod::substitution);
    const auto mass = resolve_scenario(db.scenario("Sc.4"), db, AllocationMethod::mass);
    CHECK(sub.find(ProcessId("n_fertilizer_equivalent_pulp")).has_value());
    CHECK_FALSE(mass.find(ProcessId("n_fertilizer_equivalent_pulp")).has_value());
}

TEST_CASE("missing stage for the polymer is rejected") {
    const auto& db = testing::bundled().db;
    auto s = db.scenario("Sc.4");
    s.stages.erase(s.stages.begin() + 1);
    CHECK_THROWS_AS(validate_scenario(s, db), ValidationError);
    CHECK_THROWS_AS(resolve_scenario(s, db, AllocationMethod::substitution), ValidationError);
}

TEST_CASE("unknown stage process is a reference error") {
    const auto& db = testing::bundled().db;
    auto s = db.scenario("Sc.4");
    s.stages[0].process = ProcessId("beet_on_mars");
    try {
        validate_scenario(s, db);
        FAIL("expected ReferenceError");
    } catch (const ReferenceError& e) {
        CHECK(e.id() == "beet_on_mars");
    }
}

TEST_CASE("cycles between products are rejected") {
    ProcessDataset a, b;
    a.id = ProcessId("a");
    b.id = ProcessId("b");
    a.exchanges.push_back(Exchange{ProcessId("b"), 1.0, Direction::input, FixedDist{}});
    b.exchanges.push_back(Exchange{ProcessId("a"), 1.0, Direction::input, FixedDist{}});
    const std::vector<ProcessDataset> ps{a, b};
    CHECK_THROWS_AS(product_edges(ps), ValidationError);
}

TEST_CASE("scenario JSON round-trips") {
    for (const auto& s : testing::bundled().db.scenarios) CHECK(scenario_from_json(scenario_to_json(s)) == s);
}
