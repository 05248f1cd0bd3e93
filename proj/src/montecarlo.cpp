#include "verdalca/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "verdalca/errors.hpp"
#include "verdalca/sampling.hpp"

namespace verdalca {

std::vector<double> McResult::input_column(std::size_t param) const {
    std::vector<double> col(runs());
    for (std::size_t r = 0; r < runs(); ++r) col[r] = input(r, param);
    return col;
}

std::vector<double> McResult::output_column(ImpactCategoryKey key) const {
    std::vector<double> col(runs());
    for (std::size_t r = 0; r < runs(); ++r) col[r] = outputs[r][index_of(key)];
    return col;
}

namespace {

/// Indices (into model.parameters()) of the parameters that get sampled.
std::vector<std::size_t> selected(const ScenarioModel& model, const McConfig& config) {
    const auto& params = model.parameters();
    std::vector<std::size_t> out;
    if (config.selection.empty()) {
        for (std::size_t i = 0; i < params.size(); ++i) out.push_back(i);
        return out;
    }
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < params.size(); ++i) index.emplace(params[i].id, i);
    for (const auto& id : config.selection) {
        auto it = index.find(id);
        if (it == index.end()) throw ValidationError("unknown uncertain parameter \"" + id + "\"");
        out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void check_config(const McConfig& config) {
    if (config.n_runs == 0) throw ValidationError("n_runs must be positive");
    if (config.workers < 0) throw ValidationError("workers must be >= 0");
}

struct RunSlot {
    bool ok = false;
    RunResult result;
};

std::vector<double> draw_values(const ScenarioModel& model, const McConfig& config,
                                const std::vector<std::size_t>& chosen, std::size_t run) {
    const auto& params = model.parameters();
    auto values = model.base_values();
    if (config.n_runs > 1) {
        for (std::size_t i : chosen) {
            values[i] = sample_parameter(params[i].spec, params[i].base, config.seed, run, params[i].id);
        }
    }
    return values;
}

RunSlot run_one(const ScenarioModel& model, const McConfig& config, const std::vector<std::size_t>& chosen,
                std::size_t run, double* inputs_row) {
    const auto values = draw_values(model, config, chosen, run);
    for (std::size_t k = 0; k < chosen.size(); ++k) inputs_row[k] = values[chosen[k]];
    RunSlot slot;
    try {
        slot.result = model.evaluate(values);
        slot.ok = true;
        for (double v : slot.result.impacts) slot.ok = slot.ok && std::isfinite(v);
    } catch (const ComputeError&) {
        slot.ok = false;
    } catch (const InputError&) {
        // A draw can make a dataset invalid (e.g. all outputs worth nothing).
        slot.ok = false;
    }
    return slot;
}

McResult merge(const ScenarioModel& model, const McConfig& config, const std::vector<std::size_t>& chosen,
               std::vector<RunSlot>& slots, const std::vector<double>& raw_inputs) {
    McResult out;
    for (std::size_t i : chosen) out.parameter_ids.push_back(model.parameters()[i].id);
    const std::size_t p = chosen.size();
    for (std::size_t r = 0; r < slots.size(); ++r) {
        if (!slots[r].ok) {
            ++out.failed_runs;
            continue;
        }
        out.run_index.push_back(r);
        out.inputs.insert(out.inputs.end(), raw_inputs.begin() + static_cast<std::ptrdiff_t>(r * p),
                          raw_inputs.begin() + static_cast<std::ptrdiff_t>((r + 1) * p));
        out.outputs.push_back(slots[r].result.impacts);
        out.ledgers.push_back(slots[r].result.ledger);
    }
    if (static_cast<double>(out.failed_runs) > kMaxFailureFraction * static_cast<double>(config.n_runs)) {
        throw ComputeError("Monte Carlo aborted: " + std::to_string(out.failed_runs) + " of " +
                           std::to_string(config.n_runs) + " runs failed (singular or invalid draws)");
    }
    for (const auto key : kAllCategories) out.summary[index_of(key)] = summarize(out.output_column(key));
    return out;
}

}  // namespace

std::vector<double> sample_run(const ScenarioModel& model, const McConfig& config, std::size_t run) {
    check_config(config);
    return draw_values(model, config, selected(model, config), run);
}

McResult run_mc(const ScenarioModel& model, const McConfig& config, const ProgressFn& progress) {
    check_config(config);
    const auto chosen = selected(model, config);
    const std::size_t n = config.n_runs;
    std::vector<RunSlot> slots(n);
    std::vector<double> raw_inputs(n * chosen.size());
    std::atomic<std::size_t> done{0};

#ifdef _OPENMP
    const int threads = config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
#endif
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n); ++r) {
        const auto run = static_cast<std::size_t>(r);
        slots[run] = run_one(model, config, chosen, run, raw_inputs.data() + run * chosen.size());
        const std::size_t finished = ++done;
        if (progress) progress(finished, n);
    }
    return merge(model, config, chosen, slots, raw_inputs);
}

McResult run_mc_serial(const ScenarioModel& model, const McConfig& config) {
    check_config(config);
    const auto chosen = selected(model, config);
    const std::size_t n = config.n_runs;
    std::vector<RunSlot> slots(n);
    std::vector<double> raw_inputs(n * chosen.size());
    for (std::size_t run = 0; run < n; ++run) {
        slots[run] = run_one(model, config, chosen, run, raw_inputs.data() + run * chosen.size());
    }
    return merge(model, config, chosen, slots, raw_inputs);
}

namespace {

SensitivityRecord rocc_row(const McResult& mc, std::size_t param, const std::array<std::vector<double>, kCategoryCount>& ys) {
    SensitivityRecord rec;
    rec.parameter_id = mc.parameter_ids[param];
    const auto x = mc.input_column(param);
    for (std::size_t c = 0; c < kCategoryCount; ++c) rec.rocc[c] = spearman_rocc(x, ys[c]).rho;
    return rec;
}

void finish_ctv(Sensitivity& s, CtvMode mode) {
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
        std::vector<double> rho(s.records.size());
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = s.records[i].rocc[c];
        const auto ctv = contribution_to_variance(rho, mode);
        s.degenerate[c] = ctv.degenerate;
        for (std::size_t i = 0; i < rho.size(); ++i) s.records[i].ctv[c] = ctv.ctv[i];
    }
}

std::array<std::vector<double>, kCategoryCount> outputs_by_category(const McResult& mc) {
    std::array<std::vector<double>, kCategoryCount> ys;
    for (const auto key : kAllCategories) ys[index_of(key)] = mc.output_column(key);
    return ys;
}

}  // namespace

Sensitivity sensitivity(const McResult& mc, CtvMode mode) {
    if (mc.runs() < 2) throw ValidationError("sensitivity needs at least 2 successful runs");
    const auto ys = outputs_by_category(mc);
    Sensitivity s;
    s.records.resize(mc.parameter_ids.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s.records.size()); ++i) {
        s.records[static_cast<std::size_t>(i)] = rocc_row(mc, static_cast<std::size_t>(i), ys);
    }
    finish_ctv(s, mode);
    return s;
}

Sensitivity sensitivity_serial(const McResult& mc, CtvMode mode) {
    if (mc.runs() < 2) throw ValidationError("sensitivity needs at least 2 successful runs");
    const auto ys = outputs_by_category(mc);
    Sensitivity s;
    for (std::size_t i = 0; i < mc.parameter_ids.size(); ++i) s.records.push_back(rocc_row(mc, i, ys));
    finish_ctv(s, mode);
    return s;
}

}  // namespace verdalca
