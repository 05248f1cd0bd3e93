#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "verdalca/gsa.hpp"
#include "verdalca/montecarlo.hpp"
#include "verdalca/sampling.hpp"
#include "verdalca/statistics.hpp"

using namespace verdalca;

TEST_CASE("spearman on monotone data") {
    const std::vector<double> x{1, 2, 3};
    CHECK(spearman_rocc(x, std::vector<double>{10, 20, 30}).rho == doctest::Approx(1.0));
    CHECK(spearman_rocc(x, std::vector<double>{3, 2, 1}).rho == doctest::Approx(-1.0));
}

TEST_CASE("spearman with ties uses average ranks") {
    const std::vector<double> x{1, 2, 2, 3};
    const std::vector<double> y{1, 3, 2, 4};
    CHECK(average_ranks(x) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(std::fabs(spearman_rocc(x, y).rho - oracle::spearman(x, y)) <= 1e-12);
}

TEST_CASE("spearman matches the rank-then-pearson oracle on 1000 random vectors") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> len(2, 60);
    std::uniform_int_distribution<int> small(0, 5);
    std::normal_distribution<double> z;
    for (int t = 0; t < 1000; ++t) {
        const int n = len(rng);
        std::vector<double> x(n), y(n);
        const bool ties = t % 2 == 0;
        for (int i = 0; i < n; ++i) {
            x[i] = ties ? small(rng) : z(rng);
            y[i] = ties ? small(rng) + 0.5 * x[i] : z(rng) + 0.3 * x[i];
        }
        const auto got = spearman_rocc(x, y);
        CAPTURE(t);
        CHECK(std::fabs(got.rho - oracle::spearman(x, y)) <= 1e-12);
    }
}

TEST_CASE("spearman is invariant under increasing transforms") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    std::vector<double> x(200), y(200), ey(200), ly(200);
    for (int i = 0; i < 200; ++i) {
        x[i] = z(rng);
        y[i] = x[i] + z(rng);
        ey[i] = std::exp(y[i]);
        ly[i] = 2 * y[i] + 7;
    }
    const double rho = spearman_rocc(x, y).rho;
    CHECK(std::fabs(spearman_rocc(x, ey).rho - rho) <= 1e-12);
    CHECK(std::fabs(spearman_rocc(x, ly).rho - rho) <= 1e-12);
}

TEST_CASE("strong linear signal gives rho above 0.9") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    std::vector<double> x(1000), y(1000);
    for (int i = 0; i < 1000; ++i) {
        x[i] = z(rng);
        y[i] = 3 * x[i] + 0.1 * z(rng);
    }
    CHECK(spearman_rocc(x, y).rho > 0.9);
}

TEST_CASE("constant input is flagged degenerate") {
    const std::vector<double> x{1, 1, 1};
    const auto r = spearman_rocc(x, std::vector<double>{1, 2, 3});
    CHECK(r.degenerate);
    CHECK(r.rho == 0.0);
}

TEST_CASE("ctv normalizes squared correlations") {
    const std::vector<double> one{0.3};
    CHECK(contribution_to_variance(one).ctv == std::vector<double>{1.0});
    const std::vector<double> two{0.6, 0.8};
    const auto c = contribution_to_variance(two).ctv;
    CHECK(c[0] == doctest::Approx(0.36));
    CHECK(c[1] == doctest::Approx(0.64));
    const std::vector<double> zeros{0.0, 0.0};
    CHECK(contribution_to_variance(zeros).degenerate);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> rho(1 + t % 17);
        for (auto& r : rho) r = u(rng);
        for (auto mode : {CtvMode::spearman, CtvMode::two_step}) {
            const auto r = contribution_to_variance(rho, mode);
            if (r.degenerate) continue;
            CHECK(std::fabs(std::accumulate(r.ctv.begin(), r.ctv.end(), 0.0) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("two-step screening drops weak correlations") {
    const std::vector<double> rho{0.6, 0.8, 0.01};
    const auto c = contribution_to_variance(rho, CtvMode::two_step).ctv;
    CHECK(c[2] == 0.0);
    CHECK(c[0] == doctest::Approx(0.36));
}

TEST_CASE("toy model y = 2 x1 + x2 attributes about 0.8 to x1") {
    McResult mc;
    mc.parameter_ids = {"x1", "x2"};
    const std::size_t n = 10000;
    for (std::size_t r = 0; r < n; ++r) {
        CounterRng g(12345, r, 0);
        const double x1 = g.standard_normal();
        const double x2 = g.standard_normal();
        mc.run_index.push_back(r);
        mc.inputs.push_back(x1);
        mc.inputs.push_back(x2);
        ImpactVector out{};
        out[0] = 2 * x1 + x2;
        mc.outputs.push_back(out);
    }
    const auto s = sensitivity(mc);
    const double ctv1 = s.records[0].ctv[0];
    CHECK(ctv1 >= 0.74);
    CHECK(ctv1 <= 0.86);
    CHECK(s.records[0].ctv[0] + s.records[1].ctv[0] == doctest::Approx(1.0));
    CHECK(s.degenerate[1]);
    const auto serial = sensitivity_serial(mc);
    CHECK(serial.records[0].ctv == s.records[0].ctv);
    CHECK(serial.records[1].rocc == s.records[1].rocc);
}

TEST_CASE("quadrant rule with ties toward I") {
    const Thresholds t{1.0, 0.5};
    CHECK(classify(0.5, 0.2, t) == Quadrant::I);
    CHECK(classify(2.0, 0.9, t) == Quadrant::IV);
    CHECK(classify(1.0, 0.5, t) == Quadrant::I);
    CHECK(classify(2.0, 0.1, t) == Quadrant::II);
    CHECK(classify(0.1, 0.9, t) == Quadrant::III);
}

TEST_CASE("quadrant matches the brute-force oracle on 1000 triples") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> grid(0, 4);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 1000; ++t) {
        // Half the draws on a coarse grid so ties actually happen.
        const bool coarse = t % 2 == 0;
        const double impact = coarse ? grid(rng) : u(rng), ctv = coarse ? grid(rng) : u(rng);
        const Thresholds th{coarse ? double(grid(rng)) : u(rng), coarse ? double(grid(rng)) : u(rng)};
        CHECK(static_cast<int>(classify(impact, ctv, th)) + 1 == oracle::quadrant(impact, ctv, th.impact, th.ctv));
    }
}

TEST_CASE("quantiles and summaries") {
    const std::vector<double> s{1, 2, 3, 4};
    CHECK(quantile_sorted(s, 0.5) == 2.5);
    CHECK(quantile_sorted(s, 0.0) == 1.0);
    CHECK(quantile_sorted(s, 1.0) == 4.0);
    const auto sum = summarize(std::vector<double>{4, 1, 3, 2});
    CHECK(sum.mean == 2.5);
    CHECK(sum.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(summarize(std::vector<double>{7}).sd == 0.0);
}
