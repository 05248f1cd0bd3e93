#include "verdalca/service.hpp"

#include <mutex>

#include "verdalca/errors.hpp"

namespace verdalca {

using nlohmann::json;

json error_envelope(std::string_view code, std::string_view message, json detail) {
    return {{"code", code}, {"message", message}, {"detail", std::move(detail)}};
}

namespace {

ApiResponse error_response(int status, std::string_view code, std::string_view message, json detail = nullptr) {
    return {status, error_envelope(code, message, std::move(detail))};
}

/// Maps library exceptions onto status codes. Anything unexpected is a 500.
template <class F>
ApiResponse guarded(F&& f) {
    try {
        return f();
    } catch (const ReferenceError& e) {
        return error_response(422, "unknown_reference", e.what(), {{"id", e.id()}});
    } catch (const DuplicateIdError& e) {
        return error_response(422, "duplicate_id", e.what(), {{"id", e.id()}});
    } catch (const UnknownCategoryError& e) {
        return error_response(422, "unknown_category", e.what());
    } catch (const InputError& e) {
        return error_response(422, "validation_error", e.what());
    } catch (const SingularSystemError& e) {
        return error_response(500, "singular_system", e.what(), {{"condition_estimate", e.condition_estimate()}});
    } catch (const std::exception& e) {
        return error_response(500, "compute_error", e.what());
    }
}

std::optional<ApiResponse> parse_body(std::string_view body, json& out) {
    try {
        out = json::parse(body);
    } catch (const json::parse_error& e) {
        return error_response(400, "malformed_json", "request body is not valid JSON", {{"parser", e.what()}});
    }
    if (!out.is_object()) return error_response(422, "validation_error", "request body must be a JSON object");
    return std::nullopt;
}

std::optional<ApiResponse> too_large(const json& runs) {
    if (runs.is_number_integer() && runs.get<std::int64_t>() > static_cast<std::int64_t>(kMaxRequestRuns)) {
        return error_response(413, "too_many_runs", "n_runs exceeds the limit of " + std::to_string(kMaxRequestRuns),
                              {{"n_runs", runs}, {"limit", kMaxRequestRuns}});
    }
    return std::nullopt;
}

json scenario_summary(const ScenarioDefinition& s) {
    json stages = json::object();
    for (const auto& st : s.stages) stages[std::string(to_string(st.role))] = st.process.str();
    return {{"id", s.id.str()}, {"name", s.name}, {"polymer", std::string(to_string(s.polymer))}, {"stages", stages}};
}

}  // namespace

ApiResponse Service::list_scenarios() const {
    json list = json::array();
    for (const auto& s : ws_.db.scenarios) list.push_back(scenario_summary(s));
    return {200, {{"scenarios", list}, {"metadata", metadata_json(ws_.metadata())}}};
}

ApiResponse Service::get_scenario(std::string_view id) const {
    const ScenarioDefinition* s = ws_.db.find_scenario(id);
    if (!s) return error_response(404, "not_found", "unknown scenario \"" + std::string(id) + "\"", {{"id", id}});
    return {200, scenario_to_json(*s)};
}

ApiResponse Service::evaluate(std::string_view body) const {
    json j;
    if (auto bad = parse_body(body, j)) return *bad;
    if (j.contains("mc") && j.at("mc").is_object() && j.at("mc").contains("n_runs")) {
        if (auto big = too_large(j.at("mc").at("n_runs"))) return *big;
    }
    return guarded([&] { return ApiResponse{200, run_evaluation(ws_, evaluation_request_from_json(j, ws_.db))}; });
}

std::variant<GsaRequest, ApiResponse> Service::prepare_gsa(std::string_view body) const {
    json j;
    if (auto bad = parse_body(body, j)) return *bad;
    if (j.contains("n_runs")) {
        if (auto big = too_large(j.at("n_runs"))) return *big;
    }
    GsaRequest req;
    ApiResponse parsed = guarded([&] {
        req = gsa_request_from_json(j, ws_);
        return ApiResponse{};
    });
    if (parsed.status != 200) return parsed;
    return req;
}

ApiResponse Service::gsa(std::string_view body) const {
    auto prepared = prepare_gsa(body);
    if (auto* rejected = std::get_if<ApiResponse>(&prepared)) return *rejected;
    const auto& req = std::get<GsaRequest>(prepared);
    return guarded([&] { return ApiResponse{200, run_gsa(ws_, req)}; });
}

std::string sse_event(std::string_view event, const json& data) {
    return "event: " + std::string(event) + "\ndata: " + data.dump() + "\n\n";
}

void Service::gsa_stream(const GsaRequest& req, const EventWriter& write,
                         std::chrono::milliseconds heartbeat_after) const {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto min_gap = std::chrono::milliseconds(100);
    auto last = start - min_gap;
    std::mutex mu;
    const std::size_t alternatives = req.alternatives.size();
    auto progress = [&](std::size_t alt, std::size_t done, std::size_t total) {
        std::lock_guard lock(mu);
        const auto now = Clock::now();
        if (now - start < heartbeat_after || (now - last < min_gap && done != total)) return;
        last = now;
        write(sse_event("progress", {{"alternative", alt},
                                     {"alternatives", alternatives},
                                     {"runs_done", done},
                                     {"runs_total", total}}));
    };
    const ApiResponse result = guarded([&] { return ApiResponse{200, run_gsa(ws_, req, progress)}; });
    std::lock_guard lock(mu);
    if (result.status == 200) {
        write(sse_event("result", result.body));
    } else {
        write(sse_event("error", json{{"status", result.status}, {"error", result.body}}));
    }
}

}  // namespace verdalca
