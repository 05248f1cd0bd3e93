#include <doctest.h>

#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "verdalca/allocation.hpp"
#include "verdalca/database.hpp"
#include "verdalca/errors.hpp"
#include "verdalca/evaluate.hpp"

using namespace verdalca;

namespace {

Exchange emission(const char* flow, double amount) {
    return Exchange{FlowId(flow), amount, Direction::output, FixedDist{}};
}

/// 0.2 kg molasses and 0.8 kg sugar from one tonne-ish of cane, 1 kg CO2 in total.
ProcessDataset mill() {
    ProcessDataset p;
    p.id = ProcessId("mill");
    p.name = "mill";
    p.reference_product = ReferenceProduct{"molasses", Unit::kg, 0.2, 0.10, FixedDist{}};
    p.exchanges.push_back(emission("co2_fossil", 1.0));
    p.co_products.push_back(CoProduct{"sugar", 0.8, 0.30, ProcessId("sugar_market"), FixedDist{}, FixedDist{}});
    return p;
}

/// Units of each child's product made per parent reference output. Child
/// exchanges are per its own reference amount.
double output_quantity(const ProcessDataset& parent, std::size_t child) {
    return child == 0 ? 1.0 : parent.co_products[child - 1].mass_per_ref_unit;
}

}  // namespace

TEST_CASE("mass allocation splits proportionally to mass") {
    const auto r = apply_allocation(mill(), AllocationMethod::mass);
    REQUIRE(r.processes.size() == 2);
    CHECK(r.processes[0].id.str() == "mill");
    CHECK(r.processes[1].id.str() == "mill::sugar");
    CHECK(r.processes[0].exchanges[0].amount == doctest::Approx(0.2));
    CHECK(r.processes[1].exchanges[0].amount * 0.8 == doctest::Approx(0.8));
}

TEST_CASE("economic allocation splits by value") {
    const auto shares = allocation_shares(mill(), AllocationMethod::economic);
    const double expected = (0.2 * 0.10) / (0.8 * 0.30 + 0.2 * 0.10);
    CHECK(shares[0] == doctest::Approx(expected));
    CHECK(shares[0] == doctest::Approx(0.0769).epsilon(1e-3));
    const auto r = apply_allocation(mill(), AllocationMethod::economic);
    CHECK(r.processes[0].exchanges[0].amount == doctest::Approx(expected));
}

TEST_CASE("substitution adds a negative input of the substitute") {
    const auto r = apply_allocation(mill(), AllocationMethod::substitution);
    REQUIRE(r.processes.size() == 1);
    const auto& p = r.processes[0];
    CHECK(p.co_products.empty());
    REQUIRE(p.exchanges.size() == 2);
    CHECK(std::get<ProcessId>(p.exchanges[1].target).str() == "sugar_market");
    CHECK(p.exchanges[1].direction == Direction::input);
    CHECK(p.exchanges[1].amount == -0.8);
}

TEST_CASE("zero-price co-product gets no burden and a warning") {
    auto p = mill();
    p.co_products[0].price_per_kg = 0.0;
    std::vector<std::string> warnings;
    const auto shares = allocation_shares(p, AllocationMethod::economic, &warnings);
    CHECK(shares[0] == 1.0);
    CHECK(shares[1] == 0.0);
    CHECK(warnings.size() == 1);
}

TEST_CASE("missing prices or substitutes are validation errors") {
    auto p = mill();
    p.reference_product.price_per_kg.reset();
    CHECK_THROWS_AS(allocation_shares(p, AllocationMethod::economic), ValidationError);
    p = mill();
    p.co_products[0].substitute_process.reset();
    CHECK_THROWS_AS(apply_allocation(p, AllocationMethod::substitution), ValidationError);
}

TEST_CASE("processes without co-products are unchanged") {
    auto p = mill();
    p.co_products.clear();
    for (auto m : {AllocationMethod::substitution, AllocationMethod::mass, AllocationMethod::economic}) {
        const auto r = apply_allocation(p, m);
        REQUIRE(r.processes.size() == 1);
        CHECK(r.processes[0] == p);
    }
}

TEST_CASE("allocation conserves every exchange over 1000 random processes") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const char* flows[] = {"co2_fossil", "so2", "nitrate", "phosphate", "water_consumed"};
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        ProcessDataset p;
        p.id = ProcessId("p" + std::to_string(trial));
        p.reference_product = ReferenceProduct{"main", trial % 3 == 0 ? Unit::t : Unit::kg, 0.1 + 5 * u(rng),
                                               0.01 + u(rng), FixedDist{}};
        const int n_ex = 1 + static_cast<int>(u(rng) * 6);
        for (int e = 0; e < n_ex; ++e) {
            p.exchanges.push_back(emission(flows[e % 5], (u(rng) - 0.2) * std::pow(10.0, 4 * u(rng) - 2)));
        }
        const int n_co = 1 + static_cast<int>(u(rng) * 4);
        for (int k = 0; k < n_co; ++k) {
            const double price = k == 1 && trial % 7 == 0 ? 0.0 : 0.01 + 2 * u(rng);
            p.co_products.push_back(CoProduct{"c" + std::to_string(k), 0.01 + 10 * u(rng), price, std::nullopt,
                                              FixedDist{}, FixedDist{}});
        }
        for (auto m : {AllocationMethod::mass, AllocationMethod::economic}) {
            const auto shares = allocation_shares(p, m);
            const double total = std::accumulate(shares.begin(), shares.end(), 0.0);
            CHECK(std::fabs(total - 1.0) <= 1e-12);
            for (double s : shares) CHECK(s >= 0.0);

            const auto r = apply_allocation(p, m);
            // Children of zero-mass outputs are dropped; here every mass is positive.
            REQUIRE(r.processes.size() == p.co_products.size() + 1);
            for (std::size_t e = 0; e < p.exchanges.size(); ++e) {
                double sum = 0.0;
                for (std::size_t c = 0; c < r.processes.size(); ++c) {
                    sum += r.processes[c].exchanges[e].amount * output_quantity(p, c);
                }
                CHECK(oracle::rel_diff(sum, p.exchanges[e].amount) <= 1e-12);
                // Each child carries its share of the parent.
                for (std::size_t c = 0; c < r.processes.size(); ++c) {
                    CHECK(oracle::rel_diff(r.processes[c].exchanges[e].amount * output_quantity(p, c),
                                           shares[c] * p.exchanges[e].amount, 1e-300) <= 1e-12);
                }
            }
            ++checked;
        }
    }
    CHECK(checked == 2000);
}

TEST_CASE("substitution with a burdening substitute never raises a category total") {
    const std::string procs = R"([
      {"id":"main","name":"main","location":"DE","reference_product":{"name":"m","unit":"kg","amount":1},
       "exchanges":[{"target":"co2_fossil","amount":2,"direction":"output"},
                    {"target":"so2","amount":0.01,"direction":"output"},
                    {"target":"water_consumed","amount":0.5,"direction":"input"}],
       "co_products":[{"name":"pulp","mass_per_ref_unit":0.7,"substitute_process":"sub"}]},
      {"id":"sub","name":"substitute","location":"DE","reference_product":{"name":"s","unit":"kg","amount":1},
       "exchanges":[{"target":"co2_fossil","amount":0.3,"direction":"output"},
                    {"target":"water_consumed","amount":0.1,"direction":"input"},
                    {"target":"nitrate","amount":0.002,"direction":"output"}]},
      {"id":"alone","name":"main without co-product","location":"DE","reference_product":{"name":"m","unit":"kg","amount":1},
       "exchanges":[{"target":"co2_fossil","amount":2,"direction":"output"},
                    {"target":"so2","amount":0.01,"direction":"output"},
                    {"target":"water_consumed","amount":0.5,"direction":"input"}]}])";
    const std::string scen = R"([
      {"id":"with","name":"with","polymer":"fossil","stages":[{"role":"pet","process":"main","location":"DE"}]},
      {"id":"without","name":"without","polymer":"fossil","stages":[{"role":"pet","process":"alone","location":"DE"}]}])";
    const auto db = load_database_string(oracle::toy_database(procs, scen));
    const auto with = evaluate_scenario(db, db.scenario("with")).result.inventory_impacts;
    const auto without = evaluate_scenario(db, db.scenario("without")).result.inventory_impacts;
    for (auto key : kAllCategories) {
        CAPTURE(to_string(key));
        CHECK(with[index_of(key)] <= without[index_of(key)]);
    }
    CHECK(with[index_of(ImpactCategoryKey::GWP)] == doctest::Approx(2.0 - 0.7 * 0.3));
    CHECK(with[index_of(ImpactCategoryKey::WU)] == doctest::Approx(0.5 - 0.7 * 0.1));
}
