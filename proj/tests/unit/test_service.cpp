#include <doctest.h>

#include <sstream>
#include <thread>

#include "support/bundled.hpp"
#include "verdalca/cli.hpp"
#include "verdalca/service.hpp"

// After the library headers: httplib's resolver headers define _res, which Eigen uses.
#include <httplib.h>

using namespace verdalca;
using nlohmann::json;

namespace {

const Service& service() {
    static const Service s(testing::bundled());
    return s;
}

json cli_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    std::ostringstream out, err;
    REQUIRE(run_cli(args, out, err) == 0);
    return json::parse(out.str());
}

double impact(const json& report, const std::string& category) {
    for (const auto& row : report.at("impacts"))
        if (row.at("category") == category) return row.at("value").get<double>();
    throw std::runtime_error("no category " + category);
}

std::map<std::string, std::map<std::string, json>> gsa_rows(const json& report) {
    std::map<std::string, std::map<std::string, json>> out;
    for (const auto& row : report.at("rows")) out[row.at("alternative")][row.at("category")] = row;
    return out;
}

}  // namespace

TEST_CASE("list scenarios") {
    const auto r = service().list_scenarios();
    CHECK(r.status == 200);
    REQUIRE(r.body.at("scenarios").size() == 13);
    CHECK(r.body.at("scenarios")[0].at("id") == "Sc.1");
    CHECK(r.body.at("scenarios")[12].at("id") == "fossil");
}

TEST_CASE("get Sc.7 returns its stages") {
    const auto r = service().get_scenario("Sc.7");
    CHECK(r.status == 200);
    std::map<std::string, std::string> stages;
    for (const auto& s : r.body.at("stages")) stages[s.at("role")] = s.at("process");
    CHECK(stages.at("feedstock") == "sugarcane_cultivation_br");
    CHECK(stages.at("meg") == "meg_kashipur_in");
    CHECK(stages.at("tpa") == "tpa_bio_nl");
    CHECK(stages.at("pet") == "pet_rotterdam_nl");
}

TEST_CASE("unknown scenario is 404 with an envelope") {
    const auto r = service().get_scenario("Sc.99");
    CHECK(r.status == 404);
    CHECK(r.body.at("code") == "not_found");
    CHECK(r.body.at("detail").at("id") == "Sc.99");
    CHECK(r.body.contains("message"));
}

TEST_CASE("evaluate matches the CLI exactly") {
    const auto r = service().evaluate(R"({"scenario": "Sc.4"})");
    REQUIRE(r.status == 200);
    CHECK(r.body == cli_json({"evaluate", "--scenario", "Sc.4"}));
    CHECK(impact(r.body, "GWP") == doctest::Approx(2.63).epsilon(0.02));
}

TEST_CASE("halving manure lowers aquatic eutrophication") {
    const auto base = service().evaluate(R"({"scenario": "Sc.4"})");
    const auto half = service().evaluate(
        R"({"scenario": "Sc.4", "overrides": {"sugarbeet_cultivation_de/manure_fertilization": 0.0008}})");
    REQUIRE(half.status == 200);
    CHECK(impact(half.body, "AE") < impact(base.body, "AE"));
    CHECK(half.body.contains("overrides"));
}

TEST_CASE("bad override path is 422 naming the path") {
    const auto r = service().evaluate(R"({"scenario": "Sc.4", "overrides": {"sugarbeet_cultivation_de/unobtainium": 1}})");
    CHECK(r.status == 422);
    CHECK(r.body.at("message").get<std::string>().find("sugarbeet_cultivation_de/unobtainium") != std::string::npos);
}

TEST_CASE("request validation statuses") {
    CHECK(service().evaluate("{not json").status == 400);
    CHECK(service().evaluate("[1, 2]").status == 422);
    CHECK(service().evaluate(R"({"scenario": "Sc.4", "colour": "green"})").status == 422);
    const auto unknown = service().evaluate(R"({"scenario": "Sc.99"})");
    CHECK(unknown.status == 422);
    CHECK(unknown.body.at("code") == "unknown_reference");
    CHECK(service().evaluate(R"({"scenario": "Sc.4", "allocation": "cut-off"})").status == 422);
    const auto big = service().evaluate(R"({"scenario": "Sc.4", "mc": {"n_runs": 100001}})");
    CHECK(big.status == 413);
    CHECK(big.body.at("code") == "too_many_runs");
    CHECK(service().gsa(R"({"case": "fertilization", "n_runs": 200000})").status == 413);
}

TEST_CASE("inline scenarios are validated") {
    json body;
    body["scenario"] = scenario_to_json(testing::bundled().db.scenario("Sc.4"));
    body["scenario"]["id"] = "custom";
    CHECK(service().evaluate(body.dump()).status == 200);
    body["scenario"]["stages"].erase(1);
    CHECK(service().evaluate(body.dump()).status == 422);
}

TEST_CASE("evaluate with Monte Carlo matches the CLI mc summary") {
    const auto r = service().evaluate(R"({"scenario": "Sc.6", "mc": {"n_runs": 80, "seed": 5}})");
    REQUIRE(r.status == 200);
    const auto cli = cli_json({"mc", "--scenario", "Sc.6", "--runs", "80", "--seed", "5"});
    CHECK(r.body.at("mc").at("summary") == cli.at("summary"));
    CHECK(r.body.at("mc").at("parameters") == cli.at("parameters"));
}

TEST_CASE("gsa of a bundled case matches the CLI") {
    const auto r = service().gsa(R"({"case": "fertilization", "n_runs": 200, "seed": 7})");
    REQUIRE(r.status == 200);
    CHECK(r.body == cli_json({"gsa", "fertilization", "--runs", "200", "--seed", "7"}));
}

TEST_CASE("gsa: vinasse beats manure in at least four categories") {
    const auto r = service().gsa(R"({"case": "fertilization", "n_runs": 500})");
    REQUIRE(r.status == 200);
    const auto rows = gsa_rows(r.body);
    int better = 0;
    for (const auto& [cat, row] : rows.at("Alt2")) better += row.at("mean").get<double>() < rows.at("Ref").at(cat).at("mean").get<double>();
    CHECK(better >= 4);
}

TEST_CASE("gsa request errors") {
    CHECK(service().gsa(R"({"alternatives": [{"id": "a", "scenario": "Sc.4"}], "n_runs": 20})").status == 422);
    CHECK(service().gsa(R"({"case": "nope"})").status == 422);
    CHECK(service().gsa(R"({"case": "fertilization", "n_runs": 1})").status == 422);
    CHECK(service().gsa(R"({"case": "fertilization", "alternatives": []})").status == 422);
}

TEST_CASE("custom alternatives: identical variants share quadrants") {
    const auto r = service().gsa(R"({"alternatives": [{"id": "a", "scenario": "Sc.10"}, {"id": "b", "scenario": "Sc.10"}],
                                     "n_runs": 40})");
    REQUIRE(r.status == 200);
    const auto rows = gsa_rows(r.body);
    for (const auto& [cat, row] : rows.at("a")) CHECK(row.at("quadrant") == rows.at("b").at(cat).at("quadrant"));
}

TEST_CASE("heat override changes the TPA heat source") {
    const auto r = service().gsa(R"({"alternatives": [
        {"id": "NL", "scenario": "Sc.10"},
        {"id": "PL", "scenario": "Sc.10", "overrides": {
            "tpa_bio_nl/heat_mix_NL": {"amount": 0, "uncertainty": {"kind": "fixed"}},
            "tpa_bio_nl/heat_mix_PL": {"amount": 10, "uncertainty": {"kind": "lognormal", "gsd": 1.1}}}}],
        "n_runs": 40})");
    REQUIRE(r.status == 200);
    const auto rows = gsa_rows(r.body);
    CHECK(rows.at("PL").at("GWP").at("mean").get<double>() > rows.at("NL").at("GWP").at("mean").get<double>());
}

TEST_CASE("explicit thresholds reclassify") {
    const auto r = service().gsa(R"({"case": "allocation-molasses", "n_runs": 50,
                                     "thresholds": {"GWP": {"impact": 0, "ctv": 0}}})");
    REQUIRE(r.status == 200);
    for (const auto& row : r.body.at("rows"))
        if (row.at("category") == "GWP") CHECK(row.at("quadrant") == "IV");
}

TEST_CASE("concurrent identical requests return identical bodies") {
    json a, b;
    std::thread t1([&] { a = service().gsa(R"({"case": "allocation-molasses", "n_runs": 100})").body; });
    std::thread t2([&] { b = service().gsa(R"({"case": "allocation-molasses", "n_runs": 100})").body; });
    t1.join();
    t2.join();
    CHECK(a == b);
}

TEST_CASE("gsa stream sends progress then the result") {
    const std::string body = R"({"case": "allocation-molasses", "n_runs": 150})";
    auto prepared = service().prepare_gsa(body);
    REQUIRE(std::holds_alternative<GsaRequest>(prepared));
    std::vector<std::string> events;
    service().gsa_stream(std::get<GsaRequest>(prepared), [&](const std::string& ev) {
        events.push_back(ev);
        return true;
    }, std::chrono::milliseconds(0));
    REQUIRE(events.size() >= 2);
    CHECK(events.front().rfind("event: progress\n", 0) == 0);
    const std::string& last = events.back();
    REQUIRE(last.rfind("event: result\ndata: ", 0) == 0);
    const auto data = json::parse(last.substr(std::string("event: result\ndata: ").size()));
    CHECK(data == service().gsa(body).body);
    CHECK(std::holds_alternative<ApiResponse>(service().prepare_gsa("{")));
}

TEST_CASE("quick gsa stream skips heartbeats") {
    auto prepared = service().prepare_gsa(R"({"case": "allocation-molasses", "n_runs": 20})");
    std::vector<std::string> events;
    service().gsa_stream(std::get<GsaRequest>(prepared), [&](const std::string& ev) {
        events.push_back(ev);
        return true;
    }, std::chrono::hours(1));
    REQUIRE(events.size() == 1);
    CHECK(events[0].rfind("event: result", 0) == 0);
}

TEST_CASE("http routes over a real socket") {
    httplib::Server server;
    mount(server, service(), "http://localhost:5173");
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(60, 0);

    auto list = client.Get("/api/v1/scenarios");
    REQUIRE(list);
    CHECK(list->status == 200);
    CHECK(list->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    CHECK(json::parse(list->body).at("scenarios").size() == 13);

    auto missing = client.Get("/api/v1/scenarios/Sc.99");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body).at("code") == "not_found");

    auto no_route = client.Get("/api/v2/everything");
    REQUIRE(no_route);
    CHECK(no_route->status == 404);
    CHECK(json::parse(no_route->body).at("code") == "not_found");

    auto preflight = client.Options("/api/v1/evaluate");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);

    auto ev = client.Post("/api/v1/evaluate", R"({"scenario": "Sc.4"})", "application/json");
    REQUIRE(ev);
    CHECK(ev->status == 200);
    CHECK(json::parse(ev->body) == service().evaluate(R"({"scenario": "Sc.4"})").body);

    auto bad = client.Post("/api/v1/evaluate", "{", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    const std::string gsa_body = R"({"case": "allocation-molasses", "n_runs": 60})";
    auto plain = client.Post("/api/v1/gsa", gsa_body, "application/json");
    REQUIRE(plain);
    CHECK(plain->status == 200);
    CHECK(json::parse(plain->body) == service().gsa(gsa_body).body);

    httplib::Headers sse{{"Accept", "text/event-stream"}};
    auto stream = client.Post("/api/v1/gsa", sse, gsa_body, "application/json");
    REQUIRE(stream);
    CHECK(stream->status == 200);
    CHECK(stream->get_header_value("Content-Type").find("text/event-stream") == 0);
    CHECK(stream->body.find("event: result") != std::string::npos);

    auto rejected = client.Post("/api/v1/gsa", sse, R"({"case": "fertilization", "n_runs": 1})", "application/json");
    REQUIRE(rejected);
    CHECK(rejected->status == 422);

    server.stop();
    loop.join();
}
