#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdalca/calibration.hpp"
#include "verdalca/gsa.hpp"
#include "verdalca/report.hpp"

namespace verdalca {

/// Directory holding database.json, gsa_cases.json and calibration.json.
/// VERDALCA_DATA wins over the compiled-in default.
std::filesystem::path default_data_dir();

/// A loaded database together with the fingerprint of its bytes.
struct Workspace {
    ProcessDatabase db;
    std::string database_hash;
    std::filesystem::path data_dir;

    /// Empty `db_path` means <data dir>/database.json.
    static Workspace open(const std::optional<std::filesystem::path>& db_path = std::nullopt);
    static Workspace from_string(std::string_view document, std::filesystem::path data_dir = {});

    std::vector<GsaCase> gsa_cases() const;
    std::vector<CalibrationTarget> calibration_targets() const;
    ReportMetadata metadata(std::optional<std::uint64_t> seed = std::nullopt) const {
        return {database_hash, seed};
    }
};

inline constexpr std::size_t kMaxRequestRuns = 100000;

struct EvaluationRequest {
    ScenarioDefinition scenario;
    EvaluationOptions options;
    Overrides overrides;
    std::optional<McConfig> mc;
};

/// {"scenario": id | {definition}, "allocation", "biogenic_basis", "overrides", "mc": {"n_runs", "seed"}}.
/// Throws ValidationError (or ReferenceError) on anything invalid.
EvaluationRequest evaluation_request_from_json(const nlohmann::json& j, const ProcessDatabase& db);

/// Evaluate report; with `mc` set, an "mc" section holds the Monte Carlo summary.
nlohmann::json run_evaluation(const Workspace& ws, const EvaluationRequest& request);

struct GsaRequest {
    std::string case_id;
    std::string title;
    std::vector<GsaAlternative> alternatives;
    GsaConfig config;
};

/// {"case": id} or {"alternatives": [...]}, plus "n_runs", "seed", "ctv_mode", "thresholds".
GsaRequest gsa_request_from_json(const nlohmann::json& j, const Workspace& ws);
GsaRequest gsa_request_for_case(const Workspace& ws, const std::string& case_id, std::size_t n_runs,
                                std::uint64_t seed);

nlohmann::json run_gsa(const Workspace& ws, const GsaRequest& request, const GsaProgressFn& progress = {});

}  // namespace verdalca
