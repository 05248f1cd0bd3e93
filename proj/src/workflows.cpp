#include "verdalca/workflows.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>

#include "verdalca/errors.hpp"

#ifndef VERDALCA_DEFAULT_DATA_DIR
#define VERDALCA_DEFAULT_DATA_DIR "data"
#endif

namespace verdalca {

using nlohmann::json;

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("VERDALCA_DATA"); env && *env) return env;
    return VERDALCA_DEFAULT_DATA_DIR;
}

Workspace Workspace::open(const std::optional<std::filesystem::path>& db_path) {
    const auto path = db_path ? *db_path : default_data_dir() / "database.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open database " + path.string());
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    auto dir = path.parent_path();
    if (dir.empty()) dir = ".";
    return from_string(bytes, dir);
}

Workspace Workspace::from_string(std::string_view document, std::filesystem::path data_dir) {
    Workspace ws;
    ws.db = load_database_string(document);
    ws.database_hash = fingerprint_hex(document);
    ws.data_dir = std::move(data_dir);
    return ws;
}

std::vector<GsaCase> Workspace::gsa_cases() const {
    const auto path = data_dir / "gsa_cases.json";
    if (!std::filesystem::exists(path)) return {};
    return load_gsa_cases_file(path, db);
}

std::vector<CalibrationTarget> Workspace::calibration_targets() const {
    const auto path = data_dir / "calibration.json";
    if (!std::filesystem::exists(path)) return {};
    return load_calibration_targets(path);
}

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::size_t checked_runs(const json& j) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) throw ValidationError("n_runs must be an integer");
    const auto n = j.get<std::int64_t>();
    if (n < 1) throw ValidationError("n_runs must be positive");
    return static_cast<std::size_t>(n);
}

std::uint64_t checked_seed(const json& j) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ValidationError("seed must be a non-negative integer");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError(what + ": unknown field \"" + key + "\"");
    }
}

}  // namespace

EvaluationRequest evaluation_request_from_json(const json& j, const ProcessDatabase& db) {
    if (!j.is_object()) throw ValidationError("request body must be a JSON object");
    reject_unknown(j, {"scenario", "allocation", "biogenic_basis", "overrides", "mc"}, "evaluation request");
    EvaluationRequest req;
    try {
        if (!j.contains("scenario")) throw ValidationError("missing field \"scenario\"");
        const auto& sc = j.at("scenario");
        if (sc.is_string()) {
            req.scenario = db.scenario(sc.get<std::string>());
        } else if (sc.is_object()) {
            req.scenario = scenario_from_json(sc);
            validate_scenario(req.scenario, db);
        } else {
            throw ValidationError("\"scenario\" must be an id or a scenario object");
        }
        if (j.contains("allocation")) req.options.allocation = parse_allocation(j.at("allocation").get<std::string>());
        if (j.contains("biogenic_basis")) {
            req.options.biogenic = parse_biogenic_basis(j.at("biogenic_basis").get<std::string>());
        }
        if (j.contains("overrides")) req.overrides = overrides_from_json(j.at("overrides"));
        if (j.contains("mc") && !j.at("mc").is_null()) {
            const auto& mc = j.at("mc");
            if (!mc.is_object()) throw ValidationError("\"mc\" must be an object");
            reject_unknown(mc, {"n_runs", "seed"}, "mc");
            McConfig cfg;
            cfg.n_runs = mc.contains("n_runs") ? checked_runs(mc.at("n_runs")) : 1000;
            cfg.seed = mc.contains("seed") ? checked_seed(mc.at("seed")) : kDefaultSeed;
            req.mc = cfg;
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("evaluation request: ") + e.what());
    }
    return req;
}

json run_evaluation(const Workspace& ws, const EvaluationRequest& request) {
    const ProcessDatabase db = apply_overrides(ws.db, request.overrides);
    const ScenarioModel model(db, request.scenario, request.options);
    const Evaluation ev = model.evaluate_detailed();
    const std::optional<std::uint64_t> seed = request.mc ? std::optional(request.mc->seed) : std::nullopt;
    json report = evaluate_report(model, ev, ws.metadata(seed));
    if (!request.overrides.empty()) report["overrides"] = overrides_to_json(request.overrides);
    if (request.mc) {
        const McResult mc = run_mc(model, *request.mc);
        std::optional<Sensitivity> sens;
        if (mc.runs() >= 2 && !mc.parameter_ids.empty()) sens = sensitivity(mc);
        json section = mc_report(model, mc, *request.mc, sens, ws.metadata(seed));
        section.erase("metadata");
        section.erase("kind");
        report["mc"] = std::move(section);
    }
    return report;
}

GsaRequest gsa_request_for_case(const Workspace& ws, const std::string& case_id, std::size_t n_runs,
                                std::uint64_t seed) {
    for (auto& c : ws.gsa_cases()) {
        if (c.id != case_id) continue;
        GsaRequest req;
        req.case_id = c.id;
        req.title = c.title;
        req.alternatives = std::move(c.alternatives);
        req.config.n_runs = n_runs;
        req.config.seed = seed;
        return req;
    }
    throw ReferenceError(case_id, "GSA cases");
}

GsaRequest gsa_request_from_json(const json& j, const Workspace& ws) {
    if (!j.is_object()) throw ValidationError("request body must be a JSON object");
    reject_unknown(j, {"case", "alternatives", "n_runs", "seed", "ctv_mode", "thresholds"}, "GSA request");
    try {
        const std::size_t n_runs = j.contains("n_runs") ? checked_runs(j.at("n_runs")) : 1000;
        const std::uint64_t seed = j.contains("seed") ? checked_seed(j.at("seed")) : kDefaultSeed;
        GsaRequest req;
        if (j.contains("case")) {
            if (j.contains("alternatives")) throw ValidationError("give either \"case\" or \"alternatives\", not both");
            req = gsa_request_for_case(ws, j.at("case").get<std::string>(), n_runs, seed);
        } else {
            if (!j.contains("alternatives") || !j.at("alternatives").is_array()) {
                throw ValidationError("missing \"alternatives\" array");
            }
            std::size_t k = 0;
            for (const auto& a : j.at("alternatives")) {
                req.alternatives.push_back(alternative_from_json(a, ws.db, k++));
            }
            apply_default_focus(req.alternatives, ws.db);
            req.case_id = "custom";
            req.title = "custom comparison";
            req.config.n_runs = n_runs;
            req.config.seed = seed;
        }
        if (req.alternatives.size() < 2) throw ValidationError("a GSA needs at least 2 alternatives");
        if (req.config.n_runs < 2) throw ValidationError("a GSA needs n_runs >= 2");
        if (j.contains("ctv_mode")) req.config.ctv_mode = parse_ctv_mode(j.at("ctv_mode").get<std::string>());
        if (j.contains("thresholds")) {
            for (const auto& [key, t] : j.at("thresholds").items()) {
                req.config.thresholds[index_of(parse_category(key))] =
                    Thresholds{t.at("impact").get<double>(), t.at("ctv").get<double>()};
            }
        }
        return req;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("GSA request: ") + e.what());
    }
}

json run_gsa(const Workspace& ws, const GsaRequest& request, const GsaProgressFn& progress) {
    const GsaResult result = gsa_case(ws.db, request.alternatives, request.config, progress);
    return gsa_report(request.case_id, request.title, result, request.config, ws.metadata(request.config.seed));
}

}  // namespace verdalca
