// Eigen must be seen before httplib, whose resolver headers define _res.
#include "verdalca/errors.hpp"
#include "verdalca/service.hpp"

#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

int main(int argc, char** argv) {
    CLI::App app{"HTTP service for scenario evaluation and GSA", "verdalca-api"};
    std::string db;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string allow_origin;
    app.add_option("--db", db, "Process database (default: $VERDALCA_DATA/database.json)");
    app.add_option("--port", port, "Listen port")->check(CLI::Range(0, 65535));
    app.add_option("--host", host, "Listen address");
    app.add_option("--allow-origin", allow_origin, "Origin allowed by CORS, e.g. http://localhost:5173");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::optional<verdalca::Service> service;
    try {
        service.emplace(verdalca::Workspace::open(db.empty() ? std::nullopt : std::optional<std::filesystem::path>(db)));
    } catch (const verdalca::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    httplib::Server server;
    verdalca::mount(server, *service, allow_origin);
    std::cerr << "verdalca-api listening on " << host << ":" << port << " (" << service->workspace().db.scenarios.size()
              << " scenarios, database " << service->workspace().database_hash << ")\n";
    if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}
