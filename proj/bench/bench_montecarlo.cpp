// Serial reference vs OpenMP kernels on the bundled sugar beet chain.
//   ./verdalca_bench --benchmark_filter=Mc

#include <filesystem>
#include <map>

#include <benchmark/benchmark.h>

#include "verdalca/montecarlo.hpp"
#include "verdalca/workflows.hpp"

using namespace verdalca;

namespace {

const Workspace& workspace() {
    static const Workspace ws = Workspace::open(std::filesystem::path(VERDALCA_DEFAULT_DATA_DIR) / "database.json");
    return ws;
}

const ScenarioModel& model() {
    static const ScenarioModel m(workspace().db, workspace().db.scenario("Sc.4"));
    return m;
}

McConfig config(benchmark::State& state) {
    McConfig cfg;
    cfg.n_runs = static_cast<std::size_t>(state.range(0));
    cfg.seed = 42;
    return cfg;
}

void BM_McSerial(benchmark::State& state) {
    const auto cfg = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(run_mc_serial(model(), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_McParallel(benchmark::State& state) {
    const auto cfg = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(run_mc(model(), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

const McResult& sample(std::size_t n) {
    static std::map<std::size_t, McResult> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        McConfig cfg;
        cfg.n_runs = n;
        cfg.seed = 42;
        it = cache.emplace(n, run_mc(model(), cfg)).first;
    }
    return it->second;
}

void BM_SensitivitySerial(benchmark::State& state) {
    const auto& mc = sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sensitivity_serial(mc));
}

void BM_SensitivityParallel(benchmark::State& state) {
    const auto& mc = sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sensitivity(mc));
}

}  // namespace

BENCHMARK(BM_McSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SensitivitySerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SensitivityParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
