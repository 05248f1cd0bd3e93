#include <doctest.h>

#include <cmath>
#include <mutex>

#include "support/bundled.hpp"
#include "support/oracles.hpp"
#include "verdalca/errors.hpp"
#include "verdalca/montecarlo.hpp"
#include "verdalca/sampling.hpp"

using namespace verdalca;

namespace {

double geometric_sd(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += std::log(x);
    m /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (std::log(x) - m) * (std::log(x) - m);
    return std::exp(std::sqrt(ss / static_cast<double>(v.size() - 1)));
}

ProcessDatabase one_emission(const std::string& uncertainty) {
    const std::string procs = R"([
      {"id":"p","name":"p","location":"DE","reference_product":{"name":"p","unit":"kg","amount":1},
       "exchanges":[{"target":"co2_fossil","amount":1,"direction":"output","uncertainty":)" + uncertainty + R"(},
                    {"target":"so2","amount":0.5,"direction":"output"}]}])";
    const std::string scen = R"([{"id":"s","name":"s","polymer":"fossil","stages":[{"role":"pet","process":"p","location":"DE"}]}])";
    return load_database_string(oracle::toy_database(procs, scen));
}

}  // namespace

TEST_CASE("fixed and degenerate uniform draws return the base") {
    CounterRng rng(1, 2, 3);
    for (int i = 0; i < 20; ++i) {
        CHECK(draw(FixedDist{}, 3.0, rng) == 3.0);
        CHECK(draw(UniformDist{2, 2}, 2.0, rng) == 2.0);
    }
}

TEST_CASE("lognormal draws have the requested geometric mean and GSD") {
    std::vector<double> v;
    for (std::uint64_t r = 0; r < 10000; ++r) v.push_back(sample_parameter(LognormalDist{1.5}, 1.0, 42, r, "x"));
    double lm = 0;
    for (double x : v) lm += std::log(x);
    const double gm = std::exp(lm / 10000);
    CHECK(gm >= 0.97);
    CHECK(gm <= 1.03);
    const double gsd = geometric_sd(v);
    CHECK(gsd >= 1.45);
    CHECK(gsd <= 1.55);
}

TEST_CASE("other distributions stay in support") {
    CounterRng rng(9, 0, 1);
    for (int i = 0; i < 1000; ++i) {
        const double u = draw(UniformDist{1, 3}, 2.0, rng);
        CHECK(u > 1.0);
        CHECK(u < 3.0);
        const double t = draw(TriangularDist{1, 1.5, 3}, 1.5, rng);
        CHECK(t >= 1.0);
        CHECK(t <= 3.0);
    }
}

TEST_CASE("draws depend only on seed, run and parameter id") {
    const double a = sample_parameter(LognormalDist{1.3}, 2.0, 7, 11, "p/co2_fossil");
    CHECK(sample_parameter(LognormalDist{1.3}, 2.0, 7, 11, "p/co2_fossil") == a);
    CHECK(sample_parameter(LognormalDist{1.3}, 2.0, 7, 12, "p/co2_fossil") != a);
    CHECK(sample_parameter(LognormalDist{1.3}, 2.0, 8, 11, "p/co2_fossil") != a);
    CHECK(sample_parameter(LognormalDist{1.3}, 2.0, 7, 11, "p/so2") != a);
}

TEST_CASE("all-fixed model repeats the deterministic result") {
    const auto db = one_emission(R"({"kind":"fixed"})");
    const ScenarioModel model(db, db.scenario("s"));
    CHECK(model.parameters().empty());
    McConfig cfg;
    cfg.n_runs = 20;
    const auto mc = run_mc(model, cfg);
    const auto det = model.evaluate().impacts;
    for (const auto& row : mc.outputs) CHECK(row == det);
}

TEST_CASE("single linear lognormal parameter passes its GSD to the output") {
    const auto db = one_emission(R"({"kind":"lognormal","gsd":1.4})");
    const ScenarioModel model(db, db.scenario("s"));
    McConfig cfg;
    cfg.n_runs = 10000;
    cfg.seed = 3;
    const auto mc = run_mc(model, cfg);
    CHECK(std::fabs(geometric_sd(mc.output_column(ImpactCategoryKey::GWP)) - 1.4) <= 0.05);
}

TEST_CASE("symmetric distributions converge to the deterministic mean") {
    const auto db = one_emission(R"({"kind":"normal","sd":0.1})");
    const ScenarioModel model(db, db.scenario("s"));
    McConfig cfg;
    cfg.n_runs = 4000;
    cfg.seed = 5;
    const auto mc = run_mc(model, cfg);
    const auto& s = mc.summary[index_of(ImpactCategoryKey::GWP)];
    CHECK(std::fabs(s.mean - 1.0) <= 3 * s.sd / std::sqrt(4000.0));
}

TEST_CASE("n = 1 uses base values") {
    const auto& db = testing::bundled().db;
    const ScenarioModel model(db, db.scenario("Sc.4"));
    McConfig cfg;
    cfg.n_runs = 1;
    const auto mc = run_mc(model, cfg);
    REQUIRE(mc.runs() == 1);
    const auto det = model.evaluate().impacts;
    for (auto k : kAllCategories) CHECK(mc.summary[index_of(k)].mean == doctest::Approx(det[index_of(k)]).epsilon(1e-12));
}

TEST_CASE("same seed with 1 and 8 workers is bitwise identical") {
    const auto& db = testing::bundled().db;
    const ScenarioModel model(db, db.scenario("Sc.4"));
    McConfig cfg;
    cfg.n_runs = 300;
    cfg.seed = 42;
    cfg.workers = 1;
    const auto one = run_mc(model, cfg);
    cfg.workers = 8;
    const auto eight = run_mc(model, cfg);
    CHECK(one == eight);
    const auto serial = run_mc_serial(model, cfg);
    CHECK(serial == one);
    const auto s1 = sensitivity(one);
    const auto s2 = sensitivity_serial(eight);
    REQUIRE(s1.records.size() == s2.records.size());
    for (std::size_t i = 0; i < s1.records.size(); ++i) CHECK(s1.records[i].ctv == s2.records[i].ctv);
}

TEST_CASE("different seeds differ, common random numbers across alternatives") {
    const auto& db = testing::bundled().db;
    const ScenarioModel model(db, db.scenario("Sc.4"));
    McConfig cfg;
    cfg.n_runs = 5;
    cfg.seed = 1;
    const auto a = run_mc(model, cfg);
    cfg.seed = 2;
    CHECK(run_mc(model, cfg).outputs != a.outputs);
    // The same parameter gets the same draw in another scenario sharing it.
    const ScenarioModel other(db, db.scenario("Sc.10"));
    cfg.seed = 1;
    const auto b = run_mc(other, cfg);
    for (std::size_t i = 0; i < a.parameter_ids.size(); ++i) {
        for (std::size_t j = 0; j < b.parameter_ids.size(); ++j) {
            if (a.parameter_ids[i] == b.parameter_ids[j]) CHECK(a.input(3, i) == b.input(3, j));
        }
    }
}

TEST_CASE("selection samples only the named parameters") {
    const auto& db = testing::bundled().db;
    const ScenarioModel model(db, db.scenario("Sc.4"));
    McConfig cfg;
    cfg.n_runs = 10;
    cfg.selection = {model.parameters().front().id};
    const auto mc = run_mc(model, cfg);
    CHECK(mc.parameter_ids == cfg.selection);
    cfg.selection = {"nope/nothing"};
    CHECK_THROWS_AS(run_mc(model, cfg), ValidationError);
    cfg.selection.clear();
    cfg.n_runs = 0;
    CHECK_THROWS_AS(run_mc(model, cfg), ValidationError);
}

TEST_CASE("progress reaches the total") {
    const auto& db = testing::bundled().db;
    const ScenarioModel model(db, db.scenario("Sc.6"));
    McConfig cfg;
    cfg.n_runs = 50;
    std::mutex mu;
    std::size_t last = 0;
    run_mc(model, cfg, [&](std::size_t done, std::size_t total) {
        std::lock_guard lock(mu);
        CHECK(total == 50);
        last = std::max(last, done);
    });
    CHECK(last == 50);
}
