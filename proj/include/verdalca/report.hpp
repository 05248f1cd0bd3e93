#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdalca/evaluate.hpp"
#include "verdalca/gsa.hpp"
#include "verdalca/montecarlo.hpp"

namespace verdalca {

inline constexpr const char* kToolName = "verdalca";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shared by every report so CLI and service output stay identical.
struct ReportMetadata {
    std::string database_hash;
    std::optional<std::uint64_t> seed;
};

nlohmann::json metadata_json(const ReportMetadata& meta);

nlohmann::json evaluate_report(const ScenarioModel& model, const Evaluation& ev, const ReportMetadata& meta);

struct CompareEntry {
    ScenarioDefinition scenario;
    RunResult result;
};
/// `reference` indexes into `entries`; normalized values are value / reference value.
nlohmann::json compare_report(const std::vector<CompareEntry>& entries, std::optional<std::size_t> reference,
                              const ImpactMethod& method, const EvaluationOptions& options,
                              const ReportMetadata& meta);

nlohmann::json hotspots_report(const ScenarioModel& model, const Evaluation& ev, ImpactCategoryKey category,
                               std::size_t top, const ReportMetadata& meta);

nlohmann::json mc_report(const ScenarioModel& model, const McResult& mc, const McConfig& config,
                         const std::optional<Sensitivity>& sens, const ReportMetadata& meta);

nlohmann::json gsa_report(const std::string& case_id, const std::string& title, const GsaResult& result,
                          const GsaConfig& config, const ReportMetadata& meta);

nlohmann::json calibration_report(const nlohmann::json& rows, const ReportMetadata& meta);

enum class OutputFormat { table, csv, json };
OutputFormat parse_format(std::string_view);

/// Renders any report built above. JSON is pretty-printed with two spaces.
std::string render(const nlohmann::json& report, OutputFormat format);

}  // namespace verdalca
