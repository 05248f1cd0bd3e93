#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdalca/montecarlo.hpp"
#include "verdalca/parameters.hpp"

namespace verdalca {

enum class Quadrant { I, II, III, IV };
std::string_view to_string(Quadrant);

struct Thresholds {
    double impact = 0.0;
    double ctv = 0.0;
    bool operator==(const Thresholds&) const = default;
};

/// I: both at or below; II: impact above; III: CTV above; IV: both above.
Quadrant classify(double impact, double ctv, const Thresholds& t);

/// One alternative of a comparison: a scenario, how to allocate, what to
/// change, and whose parameters count toward its aggregate CTV.
struct GsaAlternative {
    std::string id;
    std::string label;
    std::string group;
    ScenarioDefinition scenario;
    EvaluationOptions options;
    Overrides overrides;
    /// Processes whose uncertain parameters make up the aggregate CTV.
    /// Empty means every sampled parameter.
    std::vector<ProcessId> focus;
};

struct GsaConfig {
    std::size_t n_runs = 1000;
    std::uint64_t seed = 0;
    CtvMode ctv_mode = CtvMode::spearman;
    /// Per-category explicit thresholds; missing entries use medians
    /// across alternatives.
    std::array<std::optional<Thresholds>, kCategoryCount> thresholds{};
    int workers = 0;
};

struct GsaRow {
    std::string alternative;
    ImpactCategoryKey category = ImpactCategoryKey::GWP;
    std::string unit;
    double mean = 0.0;
    double sd = 0.0;
    double p2_5 = 0.0;
    double p97_5 = 0.0;
    double normalized_impact = 0.0;  ///< mean / max |mean| across alternatives
    double ctv = 0.0;                ///< aggregate over the alternative's focus parameters
    Quadrant quadrant = Quadrant::I;
};

struct GsaAlternativeResult {
    std::string id;
    std::string label;
    std::string group;
    std::size_t failed_runs = 0;
    std::vector<std::string> focus_parameters;
    Sensitivity sensitivity;
};

struct GsaResult {
    std::vector<GsaAlternativeResult> alternatives;
    std::vector<GsaRow> rows;  ///< alternative-major, categories in key order
    std::array<Thresholds, kCategoryCount> thresholds{};

    const GsaRow& row(std::string_view alternative, ImpactCategoryKey key) const;
};

/// Called with (alternative index, runs done, runs total).
using GsaProgressFn = std::function<void(std::size_t, std::size_t, std::size_t)>;

/// Needs at least 2 alternatives unless every category has explicit thresholds.
GsaResult gsa_case(const ProcessDatabase& db, const std::vector<GsaAlternative>& alternatives,
                   const GsaConfig& config, const GsaProgressFn& progress = {});

/// Recomputes aggregate CTV thresholds and quadrants, e.g. after the user moves
/// a guide line.
void reclassify(GsaResult& result, const std::array<std::optional<Thresholds>, kCategoryCount>& thresholds);

// ---------------------------------------------------------------------------
// Bundled case definitions

struct GsaCase {
    std::string id;
    std::string title;
    std::string description;
    std::vector<GsaAlternative> alternatives;
};

/// Alternatives reference scenarios by id; "scenario" may also hold an inline definition.
std::vector<GsaCase> load_gsa_cases(const nlohmann::json& document, const ProcessDatabase& db);
std::vector<GsaCase> load_gsa_cases_file(const std::filesystem::path& path, const ProcessDatabase& db);

GsaAlternative alternative_from_json(const nlohmann::json& j, const ProcessDatabase& db, std::size_t position);

/// Focus used by alternatives that name none, shared across the comparison:
/// processes named by any override path and the processes those overridden
/// exchanges point at, plus processes with co-products when alternatives
/// differ in allocation. Empty when nothing applies, which means all parameters.
void apply_default_focus(std::vector<GsaAlternative>& alternatives, const ProcessDatabase& db);

}  // namespace verdalca
