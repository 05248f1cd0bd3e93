#include <doctest.h>

#include <random>

#include "support/bundled.hpp"
#include "support/oracles.hpp"
#include "verdalca/errors.hpp"
#include "verdalca/scenario.hpp"
#include "verdalca/technosphere.hpp"

using namespace verdalca;

namespace {

ProcessDataset node(const std::string& id) {
    ProcessDataset p;
    p.id = ProcessId(id);
    p.name = id;
    return p;
}

void consume(ProcessDataset& p, const std::string& supplier, double amount) {
    p.exchanges.push_back(Exchange{ProcessId(supplier), amount, Direction::input, FixedDist{}});
}

void emit(ProcessDataset& p, const std::string& flow, double amount) {
    p.exchanges.push_back(Exchange{FlowId(flow), amount, Direction::output, FixedDist{}});
}

/// Datasets whose assembled A equals `a`, with random emissions of three flows.
std::vector<ProcessDataset> datasets_for(const oracle::Matrix& a, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = a.size();
    std::vector<ProcessDataset> out;
    for (std::size_t j = 0; j < n; ++j) {
        auto p = node("p" + std::to_string(j));
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j && a[i][j] != 0.0) consume(p, "p" + std::to_string(i), -a[i][j]);
        }
        emit(p, "co2_fossil", u(rng));
        if (u(rng) < 0.5) emit(p, "so2", u(rng) * 1e-3);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

TEST_CASE("one process without inputs gives A = [1]") {
    auto p = node("only");
    emit(p, "co2_fossil", 2.0);
    const std::vector<ProcessDataset> ps{p};
    const auto sys = assemble(ps, {});
    CHECK(sys.A.rows() == 1);
    CHECK(sys.A.coeff(0, 0) == 1.0);
    const auto sol = solve(sys, Eigen::VectorXd::Ones(1));
    CHECK(sol.s(0) == 1.0);
    CHECK(sol.g(0) == 2.0);
}

TEST_CASE("two-process chain follows the column convention") {
    auto p1 = node("p1");
    auto p2 = node("p2");
    consume(p2, "p1", 0.5);
    const std::vector<ProcessDataset> ps{p1, p2};
    const auto sys = assemble(ps, {});
    const Eigen::MatrixXd a(sys.A);
    CHECK(a(0, 0) == 1.0);
    CHECK(a(0, 1) == -0.5);
    CHECK(a(1, 0) == 0.0);
    CHECK(a(1, 1) == 1.0);
    Eigen::VectorXd f(2);
    f << 0.0, 1.0;
    const auto sol = solve(sys, f);
    CHECK(sol.s(0) == doctest::Approx(0.5));
    CHECK(sol.s(1) == doctest::Approx(1.0));
}

TEST_CASE("identity system returns the B column") {
    std::vector<ProcessDataset> ps;
    for (int j = 0; j < 3; ++j) {
        auto p = node("p" + std::to_string(j));
        emit(p, "co2_fossil", j + 1.0);
        ps.push_back(p);
    }
    const auto sys = assemble(ps, {});
    for (int k = 0; k < 3; ++k) {
        const auto sol = solve(sys, Eigen::VectorXd::Unit(3, k));
        CHECK(sol.s.isApprox(Eigen::VectorXd::Unit(3, k)));
        CHECK(sol.g(0) == doctest::Approx(k + 1.0));
    }
}

TEST_CASE("solver matches the dense elimination oracle on 100 random systems") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> size(2, 30);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = trial == 0 ? 20 : size(rng);
        const auto a = oracle::random_technosphere(n, rng);
        const auto sys = assemble(datasets_for(a, rng), {});
        std::vector<double> f(n);
        for (auto& v : f) v = u(rng);
        // Oracle works in the system's column order.
        oracle::Matrix a_sys(n, std::vector<double>(n, 0.0));
        const Eigen::MatrixXd dense(sys.A);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a_sys[i][j] = dense(i, j);
        std::vector<double> f_sys(n);
        Eigen::VectorXd fe(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t orig = std::stoul(sys.processes[j].str().substr(1));
            f_sys[j] = fe(j) = f[orig];
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t orig_i = std::stoul(sys.processes[i].str().substr(1));
                CHECK(a_sys[i][j] == a[orig_i][orig]);
            }
        }
        const auto want = oracle::dense_solve(a_sys, f_sys);
        for (auto kind : {SolverKind::dense, SolverKind::sparse}) {
            const auto sol = solve(sys, fe, kind);
            double worst = 0.0;
            for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, oracle::rel_diff(sol.s(j), want[j], 1e-12));
            CAPTURE(trial);
            CHECK(worst <= 1e-9);
            CHECK(sol.residual <= kResidualTolerance);
        }
    }
}

TEST_CASE("solve is linear in demand") {
    std::mt19937_64 rng(11);
    const auto a = oracle::random_technosphere(25, rng);
    const auto sys = assemble(datasets_for(a, rng), {});
    const Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(25, 0.1, 2.5);
    const auto base = solve(sys, f);
    for (double c : {-3.0, 0.25, 7.5}) {
        const auto scaled = solve(sys, c * f);
        for (Eigen::Index j = 0; j < base.s.size(); ++j) {
            CHECK(oracle::rel_diff(scaled.s(j), c * base.s(j), 1e-12) <= 1e-9);
        }
    }
}

TEST_CASE("solver choice follows the size threshold") {
    CHECK(choose_solver(kDenseThreshold - 1) == SolverKind::dense);
    CHECK(choose_solver(kDenseThreshold) == SolverKind::sparse);
    std::mt19937_64 rng(3);
    const auto a = oracle::random_technosphere(80, rng, 0.05);
    const auto sys = assemble(datasets_for(a, rng), {});
    const auto sol = solve(sys, Eigen::VectorXd::Ones(80));
    CHECK(sol.solver == SolverKind::sparse);
    const auto dense = solve(sys, Eigen::VectorXd::Ones(80), SolverKind::dense);
    CHECK((sol.s - dense.s).cwiseAbs().maxCoeff() <= 1e-9 * dense.s.cwiseAbs().maxCoeff());
}

TEST_CASE("singular systems raise with a condition estimate") {
    auto p1 = node("p1");
    auto p2 = node("p2");
    consume(p1, "p2", 1.0);
    consume(p2, "p1", 1.0);
    const std::vector<ProcessDataset> ps{p1, p2};
    const auto sys = assemble(ps, {});
    for (auto kind : {SolverKind::dense, SolverKind::sparse}) {
        try {
            solve(sys, Eigen::VectorXd::Ones(2), kind);
            FAIL("expected SingularSystemError");
        } catch (const SingularSystemError& e) {
            CHECK(e.condition_estimate() > kMaxCondition);
        }
    }
}

TEST_CASE("consuming an unproduced product is a singular system") {
    auto p = node("p");
    consume(p, "ghost", 1.0);
    const std::vector<ProcessDataset> ps{p};
    CHECK_THROWS_AS(assemble(ps, {}), SingularSystemError);
}

TEST_CASE("bundled Sc.6 assembles a square system over the resolved graph") {
    const auto& db = testing::bundled().db;
    const auto graph = resolve_scenario(db.scenario("Sc.6"), db, AllocationMethod::substitution);
    const auto sys = assemble(graph);
    CHECK(sys.A.rows() == sys.A.cols());
    CHECK(sys.size() == graph.size());
    std::size_t foreground = 0;
    for (const auto& n : graph.nodes) foreground += n.kind != NodeKind::background;
    CHECK(foreground == 5 + graph.scenario.transport.size());
}

TEST_CASE("regionalized flows split rows by process location") {
    auto a = node("a");
    a.location = Region::parse("IN");
    emit(a, "water_consumed", 1.0);
    auto b = node("b");
    b.location = Region::parse("DE");
    emit(b, "water_consumed", 1.0);
    consume(b, "a", 1.0);
    const std::vector<ProcessDataset> ps{a, b};
    const auto plain = assemble(ps, {});
    CHECK(plain.flows.size() == 1);
    const auto split = assemble(ps, {FlowId("water_consumed")});
    REQUIRE(split.flows.size() == 2);
    CHECK(split.flows[0].region == "DE");
    CHECK(split.flows[1].region == "IN");
}
