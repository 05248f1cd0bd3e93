#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdalca/evaluate.hpp"

namespace verdalca {

struct CalibrationTarget {
    std::string scenario;
    ImpactCategoryKey category = ImpactCategoryKey::GWP;
    double target = 0.0;
    double tolerance = 0.02;  ///< relative
    std::string citation;
};

struct CalibrationRow {
    CalibrationTarget target;
    double computed = 0.0;
    double relative_error = 0.0;
    bool pass = false;
};

std::vector<CalibrationTarget> calibration_targets_from_json(const nlohmann::json& j);
std::vector<CalibrationTarget> load_calibration_targets(const std::filesystem::path& path);

/// Evaluates each target's scenario once (substitution, stoichiometric
/// biogenic credit unless given) and compares within the target tolerance.
std::vector<CalibrationRow> verify_calibration(const ProcessDatabase& db, const std::vector<CalibrationTarget>& targets,
                                               EvaluationOptions options = {});

nlohmann::json calibration_rows_json(const std::vector<CalibrationRow>& rows);

}  // namespace verdalca
