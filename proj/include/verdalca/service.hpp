#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "verdalca/workflows.hpp"

namespace httplib {
class Server;
}

namespace verdalca {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// {code, message, detail}
nlohmann::json error_envelope(std::string_view code, std::string_view message, nlohmann::json detail = nullptr);

/// Request handling without any networking. Holds only the immutable
/// workspace, so one instance serves concurrent requests.
class Service {
public:
    explicit Service(Workspace ws) : ws_(std::move(ws)) {}

    const Workspace& workspace() const { return ws_; }

    ApiResponse list_scenarios() const;
    ApiResponse get_scenario(std::string_view id) const;
    ApiResponse evaluate(std::string_view body) const;
    ApiResponse gsa(std::string_view body) const;

    /// Parses and validates a GSA body. A response means the request is rejected.
    std::variant<GsaRequest, ApiResponse> prepare_gsa(std::string_view body) const;

    /// Runs a prepared GSA and reports it as server-sent events through
    /// `write`. Progress heartbeats start once the run has taken longer than
    /// `heartbeat_after`; the last event is "result" or "error".
    using EventWriter = std::function<bool(const std::string&)>;
    void gsa_stream(const GsaRequest& request, const EventWriter& write,
                    std::chrono::milliseconds heartbeat_after = std::chrono::seconds(1)) const;

private:
    Workspace ws_;
};

std::string sse_event(std::string_view event, const nlohmann::json& data);

/// Registers the /api/v1 routes. A non-empty `allow_origin` enables CORS for it.
void mount(httplib::Server& server, const Service& service, const std::string& allow_origin = {});

}  // namespace verdalca
