#include <doctest.h>

#include <chrono>
#include <random>

#include "support/bundled.hpp"
#include "support/oracles.hpp"
#include "verdalca/database.hpp"
#include "verdalca/errors.hpp"
#include "verdalca/evaluate.hpp"
#include "verdalca/impact.hpp"

using namespace verdalca;

namespace {

std::vector<InventoryKey> rows(std::initializer_list<const char*> flows) {
    std::vector<InventoryKey> out;
    for (const char* f : flows) out.push_back({FlowId(f), ""});
    return out;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

const ImpactMethod& bundled_method() {
    static const ImpactMethod m = ImpactMethod::from_database(testing::bundled().db);
    return m;
}

double gwp(const ImpactVector& v) { return v[index_of(ImpactCategoryKey::GWP)]; }

}  // namespace

TEST_CASE("zero inventory characterizes to zero") {
    const auto r = rows({"co2_fossil", "phosphate"});
    const auto c = characterize(r, Eigen::VectorXd::Zero(2), bundled_method());
    for (double v : c.values) CHECK(v == 0.0);
    CHECK(c.uncovered.empty());
}

TEST_CASE("one kg CO2 is one kg CO2-eq") {
    const auto r = rows({"co2_fossil"});
    CHECK(gwp(characterize(r, vec({1.0}), bundled_method()).values) == 1.0);
}

TEST_CASE("mixed inventory matches a hand dot product") {
    const auto& db = testing::bundled().db;
    auto factor_of = [&](ImpactCategoryKey key, const char* flow) {
        for (const auto& f : db.category(key)->factors)
            if (f.flow.str() == flow && !f.region) return f.factor;
        return 0.0;
    };
    const auto r = rows({"co2_fossil", "phosphate"});
    const auto c = characterize(r, vec({2.0, 0.01}), bundled_method());
    CHECK(c.values[index_of(ImpactCategoryKey::AE)] == doctest::Approx(0.01 * factor_of(ImpactCategoryKey::AE, "phosphate")));
    CHECK(gwp(c.values) == doctest::Approx(2.0 * factor_of(ImpactCategoryKey::GWP, "co2_fossil")));
}

TEST_CASE("characterization is linear") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto r = rows({"co2_fossil", "ch4", "n2o", "nh3", "nox", "so2", "phosphate", "nitrate"});
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd g1(8), g2(8);
        for (int i = 0; i < 8; ++i) {
            g1(i) = u(rng);
            g2(i) = u(rng);
        }
        const double a = u(rng) * 3, b = u(rng) * 3;
        const auto lhs = characterize(r, a * g1 + b * g2, bundled_method()).values;
        const auto c1 = characterize(r, g1, bundled_method()).values;
        const auto c2 = characterize(r, g2, bundled_method()).values;
        for (std::size_t k = 0; k < kCategoryCount; ++k) {
            const double rhs = a * c1[k] + b * c2[k];
            CHECK(std::fabs(lhs[k] - rhs) <= 1e-12 * std::max({std::fabs(lhs[k]), std::fabs(a * c1[k]), std::fabs(b * c2[k]), 1e-300}) * 4);
        }
    }
}

TEST_CASE("regional water factors fall back to the global entry") {
    std::vector<InventoryKey> r{{FlowId("water_consumed"), "IN"}, {FlowId("water_consumed"), "ZA"}};
    // Extraction is a negative inventory entry; impacts come out positive.
    const auto c = characterize(r, vec({-1.0, -1.0}), bundled_method());
    CHECK(c.values[index_of(ImpactCategoryKey::WU)] == doctest::Approx(1.6 + 1.0));
}

TEST_CASE("flows without any factor are reported once, not rejected") {
    const auto r = rows({"crude_oil", "co2_fossil"});
    const auto c = characterize(r, vec({-0.7, 1.0}), bundled_method());
    REQUIRE(c.uncovered.size() == 1);
    CHECK(c.uncovered[0].flow.flow.str() == "crude_oil");
    CHECK(c.uncovered[0].amount == -0.7);
}

TEST_CASE("biogenic credit from stoichiometry") {
    const auto& comp = testing::bundled().db.composition();
    const double full = biogenic_credit(comp, Polymer::pet100);
    const double part = biogenic_credit(comp, Polymer::pet30);
    CHECK(biogenic_credit(comp, Polymer::fossil) == 0.0);
    CHECK(std::fabs(full - 2.298) / 2.298 <= 0.005);
    CHECK(std::fabs(part - 0.454) / 0.454 <= 0.015);
    CHECK(part == 0.2 * full);
    CHECK(comp.carbon_mass_fraction() == doctest::Approx(0.6251).epsilon(1e-3));
    CHECK(biogenic_credit(comp, Polymer::pet100, BiogenicBasis::reference_table) == 2.298);
    CHECK(biogenic_credit(comp, Polymer::pet30, BiogenicBasis::reference_table) == 0.454);
}

TEST_CASE("land-use change debits are table lookups") {
    const auto& db = testing::bundled().db;
    ScenarioDefinition s;
    s.luc_feedstock_key = "miscanthus";
    s.polymer = Polymer::pet30;
    CHECK(luc_emissions(s, db.luc_factors) == -0.06);
    s.luc_feedstock_key = "wheat";
    s.polymer = Polymer::pet100;
    CHECK(luc_emissions(s, db.luc_factors) == 1.20);
    s.polymer = Polymer::fossil;
    CHECK(luc_emissions(s, db.luc_factors) == 0.0);
    s.polymer = Polymer::pet30;
    s.luc_feedstock_key = "kelp";
    CHECK_THROWS_AS(luc_emissions(s, db.luc_factors), ValidationError);
}

TEST_CASE("carbon ledger identity") {
    CHECK(carbon_ledger(0, 0, 0).net_ghg == 0.0);
    const auto beet = carbon_ledger(2.914, 0.17, 0.454);
    CHECK(beet.net_ghg == doctest::Approx(2.63));
    const auto misc = carbon_ledger(3.968, 0.44, 2.298);
    CHECK(misc.net_ghg == doctest::Approx(2.11));
    for (const auto& s : testing::bundled().db.scenarios) {
        const auto ev = evaluate_scenario(testing::bundled().db, s);
        const auto& l = ev.result.ledger;
        CHECK(l.net_ghg == l.process_ghg + l.luc_ghg - l.biogenic_credit);
        CHECK(gwp(ev.result.impacts) == l.net_ghg);
        CHECK(gwp(ev.result.inventory_impacts) == l.process_ghg);
    }
}

TEST_CASE("contributions add up to the characterized total") {
    const auto& db = testing::bundled().db;
    for (const char* id : {"Sc.3", "Sc.10", "fossil"}) {
        const auto ev = evaluate_scenario(db, db.scenario(id));
        for (auto key : kAllCategories) {
            double sum = 0.0;
            for (const auto& c : ev.contributions[index_of(key)]) sum += c.value;
            CHECK(oracle::rel_diff(sum, ev.result.inventory_impacts[index_of(key)], 1e-20) <= 1e-10);
        }
    }
}

TEST_CASE("single-process scenario owns every category") {
    const auto& db = testing::bundled().db;
    const auto ev = evaluate_scenario(db, db.scenario("fossil"));
    for (auto key : kAllCategories) {
        const auto& cs = ev.contributions[index_of(key)];
        REQUIRE(cs.size() == 1);
        CHECK(cs[0].fraction == doctest::Approx(1.0));
    }
    CHECK(ev.result.ledger.biogenic_credit == 0.0);
    CHECK(ev.result.ledger.luc_ghg == 0.0);
}

TEST_CASE("identical processes split contributions evenly") {
    const std::string procs = R"([
      {"id":"a","name":"a","location":"DE","reference_product":{"name":"a","unit":"kg","amount":1},
       "exchanges":[{"target":"co2_fossil","amount":1,"direction":"output"}]},
      {"id":"b","name":"b","location":"DE","reference_product":{"name":"b","unit":"kg","amount":1},
       "exchanges":[{"target":"co2_fossil","amount":1,"direction":"output"}]},
      {"id":"top","name":"top","location":"DE","reference_product":{"name":"t","unit":"kg","amount":1},
       "exchanges":[{"target":"a","amount":1,"direction":"input"},{"target":"b","amount":1,"direction":"input"}]}])";
    const std::string scen = R"([{"id":"s","name":"s","polymer":"fossil","stages":[{"role":"pet","process":"top","location":"DE"}]}])";
    const auto db = load_database_string(oracle::toy_database(procs, scen));
    const auto ev = evaluate_scenario(db, db.scenario("s"));
    for (const auto& c : ev.contributions[index_of(ImpactCategoryKey::GWP)]) {
        if (c.process.str() == "top") CHECK(c.fraction == 0.0);
        else CHECK(c.fraction == doctest::Approx(0.5));
    }
}

TEST_CASE("irrigation dominates water use of the Indian molasses chain") {
    const auto& db = testing::bundled().db;
    for (const char* id : {"Sc.3", "Sc.9"}) {
        const auto ev = evaluate_scenario(db, db.scenario(id));
        double share = 0.0;
        for (const auto& c : ev.contributions[index_of(ImpactCategoryKey::WU)])
            if (c.process.str() == "irrigation_in") share = c.fraction;
        CAPTURE(id);
        CHECK(share >= 0.85);
    }
}

TEST_CASE("biogenic credit is fast") {
    const auto& comp = testing::bundled().db.composition();
    const auto t0 = std::chrono::steady_clock::now();
    volatile double sink = 0;
    for (int i = 0; i < 1000; ++i) sink = sink + biogenic_credit(comp, Polymer::pet100);
    const auto per_call = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 1000;
    CHECK(per_call < 1e-3);
}
