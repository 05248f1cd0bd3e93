#include "verdalca/service.hpp"

#include <memory>

#include <httplib.h>

namespace verdalca {

namespace {

void send(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

bool wants_events(const httplib::Request& req) {
    return req.get_header_value("Accept").find("text/event-stream") != std::string::npos;
}

}  // namespace

void mount(httplib::Server& server, const Service& service, const std::string& allow_origin) {
    if (!allow_origin.empty()) {
        server.set_default_headers({{"Access-Control-Allow-Origin", allow_origin}, {"Vary", "Origin"}});
        server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
            res.status = 204;
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type, Accept");
            res.set_header("Access-Control-Max-Age", "600");
        });
    }

    server.Get("/api/v1/scenarios", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.list_scenarios());
    });
    server.Get(R"(/api/v1/scenarios/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get_scenario(req.matches[1].str()));
    });
    server.Post("/api/v1/evaluate", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.evaluate(req.body));
    });
    server.Post("/api/v1/gsa", [&service](const httplib::Request& req, httplib::Response& res) {
        if (!wants_events(req)) {
            send(res, service.gsa(req.body));
            return;
        }
        auto prepared = service.prepare_gsa(req.body);
        if (auto* rejected = std::get_if<ApiResponse>(&prepared)) {
            send(res, *rejected);
            return;
        }
        auto request = std::make_shared<GsaRequest>(std::move(std::get<GsaRequest>(prepared)));
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider("text/event-stream", [&service, request](std::size_t, httplib::DataSink& sink) {
            service.gsa_stream(*request, [&sink](const std::string& ev) { return sink.write(ev.data(), ev.size()); });
            sink.done();
            return true;
        });
    });

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
        const std::string msg = res.status == 404 ? "no route for " + req.method + " " + req.path
                                                  : "request failed with status " + std::to_string(res.status);
        res.set_content(error_envelope(res.status == 404 ? "not_found" : "http_error", msg).dump(),
                        "application/json");
        return httplib::Server::HandlerResponse::Handled;
    });
}

}  // namespace verdalca
