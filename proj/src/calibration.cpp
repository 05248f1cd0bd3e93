#include "verdalca/calibration.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "verdalca/errors.hpp"

namespace verdalca {

using nlohmann::json;

std::vector<CalibrationTarget> calibration_targets_from_json(const json& j) {
    std::vector<CalibrationTarget> out;
    try {
        for (const auto& t : j.at("targets")) {
            CalibrationTarget c;
            c.scenario = t.at("scenario").get<std::string>();
            c.category = parse_category(t.at("category").get<std::string>());
            c.target = t.at("target").get<double>();
            c.tolerance = t.at("tolerance").get<double>();
            c.citation = t.at("citation").get<std::string>();
            if (!(c.tolerance > 0.0)) throw ValidationError("calibration target tolerance must be > 0");
            if (c.citation.empty()) throw ValidationError("calibration target needs a citation");
            out.push_back(std::move(c));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("calibration targets: ") + e.what());
    }
    return out;
}

std::vector<CalibrationTarget> load_calibration_targets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return calibration_targets_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<CalibrationRow> verify_calibration(const ProcessDatabase& db, const std::vector<CalibrationTarget>& targets,
                                               EvaluationOptions options) {
    std::map<std::string, RunResult> cache;
    std::vector<CalibrationRow> rows;
    for (const auto& t : targets) {
        auto it = cache.find(t.scenario);
        if (it == cache.end()) {
            it = cache.emplace(t.scenario, ScenarioModel(db, db.scenario(t.scenario), options).evaluate()).first;
        }
        CalibrationRow row;
        row.target = t;
        row.computed = it->second.impacts[index_of(t.category)];
        row.relative_error = std::abs(row.computed - t.target) / std::abs(t.target);
        row.pass = row.relative_error <= t.tolerance;
        rows.push_back(std::move(row));
    }
    return rows;
}

json calibration_rows_json(const std::vector<CalibrationRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"scenario", r.target.scenario},
                       {"category", std::string(to_string(r.target.category))},
                       {"target", r.target.target},
                       {"tolerance", r.target.tolerance},
                       {"computed", r.computed},
                       {"relative_error", r.relative_error},
                       {"pass", r.pass},
                       {"citation", r.target.citation}});
    }
    return out;
}

}  // namespace verdalca
