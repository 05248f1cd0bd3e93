#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "verdalca/evaluate.hpp"
#include "verdalca/statistics.hpp"

namespace verdalca {

inline constexpr double kMaxFailureFraction = 0.01;

struct McConfig {
    std::size_t n_runs = 1000;
    std::uint64_t seed = 0;
    /// Parameter ids to sample; empty samples every uncertain parameter.
    /// Unselected parameters stay at their base values.
    std::vector<std::string> selection;
    /// OpenMP threads; 0 uses the runtime default.
    int workers = 0;
};

struct McResult {
    std::vector<std::string> parameter_ids;
    std::vector<std::size_t> run_index;  ///< successful runs, ascending
    std::vector<double> inputs;          ///< row-major, run_index.size() x parameter_ids.size()
    std::vector<ImpactVector> outputs;   ///< reported impacts per successful run
    std::vector<CarbonLedger> ledgers;
    std::size_t failed_runs = 0;
    std::array<Summary, kCategoryCount> summary{};

    std::size_t runs() const { return outputs.size(); }
    double input(std::size_t row, std::size_t param) const { return inputs[row * parameter_ids.size() + param]; }
    std::vector<double> input_column(std::size_t param) const;
    std::vector<double> output_column(ImpactCategoryKey key) const;

    bool operator==(const McResult&) const = default;
};

/// Called with the number of completed runs; may be called from worker threads.
using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Parameter values of one run. Run draws depend only on (seed, run, id).
/// With n_runs == 1 the single run uses base values.
std::vector<double> sample_run(const ScenarioModel& model, const McConfig& config, std::size_t run);

/// Throws ValidationError on a bad config or selection and ComputeError when
/// more than 1% of runs fail.
McResult run_mc(const ScenarioModel& model, const McConfig& config, const ProgressFn& progress = {});

/// Single-threaded reference of run_mc, kept for tests and the benchmark.
McResult run_mc_serial(const ScenarioModel& model, const McConfig& config);

struct SensitivityRecord {
    std::string parameter_id;
    std::array<double, kCategoryCount> rocc{};
    std::array<double, kCategoryCount> ctv{};
};

struct Sensitivity {
    std::vector<SensitivityRecord> records;
    std::array<bool, kCategoryCount> degenerate{};
};

/// Spearman rho of every sampled parameter against every category, and CTV.
Sensitivity sensitivity(const McResult& mc, CtvMode mode = CtvMode::spearman);
Sensitivity sensitivity_serial(const McResult& mc, CtvMode mode = CtvMode::spearman);

}  // namespace verdalca
