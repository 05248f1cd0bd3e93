#include "verdalca/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "verdalca/errors.hpp"

namespace verdalca {

using nlohmann::json;

namespace {

constexpr const char* kLedgerUnit = "kg CO2-eq/kg PET";

std::string cat(ImpactCategoryKey k) { return std::string(to_string(k)); }

json impacts_json(const ImpactVector& v, const ImpactMethod& method) {
    json out = json::array();
    for (const auto key : kAllCategories) {
        out.push_back({{"category", cat(key)},
                       {"name", method.name(key)},
                       {"value", v[index_of(key)]},
                       {"unit", method.unit(key)}});
    }
    return out;
}

json ledger_json(const CarbonLedger& l) {
    return {{"process_ghg", l.process_ghg},
            {"luc_ghg", l.luc_ghg},
            {"biogenic_credit", l.biogenic_credit},
            {"net_ghg", l.net_ghg},
            {"unit", kLedgerUnit}};
}

json scenario_header(const ScenarioDefinition& s) {
    return {{"id", s.id.str()}, {"name", s.name}, {"polymer", std::string(to_string(s.polymer))}};
}

json node_json(const ScenarioGraph& graph, const ProcessId& id) {
    const auto idx = graph.find(id);
    if (!idx) return {{"process", id.str()}};
    const auto& node = graph.nodes[*idx];
    json j{{"process", id.str()},
           {"name", node.source.name},
           {"kind", std::string(to_string(node.kind))},
           {"location", node.source.location.code()}};
    j["role"] = node.role ? json(std::string(to_string(*node.role))) : json(nullptr);
    return j;
}

std::vector<ProcessContribution> ranked(std::vector<ProcessContribution> c) {
    std::stable_sort(c.begin(), c.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) > std::abs(b.value);
        return a.process < b.process;
    });
    return c;
}

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json metadata_json(const ReportMetadata& meta) {
    json j{{"tool", kToolName}, {"version", kToolVersion}, {"database", meta.database_hash}};
    j["seed"] = meta.seed ? json(*meta.seed) : json(nullptr);
    return j;
}

json evaluate_report(const ScenarioModel& model, const Evaluation& ev, const ReportMetadata& meta) {
    const auto& graph = model.graph();
    json r;
    r["kind"] = "evaluate";
    r["metadata"] = metadata_json(meta);
    r["scenario"] = scenario_header(ev.scenario);
    r["allocation"] = std::string(to_string(ev.options.allocation));
    r["biogenic_basis"] = std::string(to_string(ev.options.biogenic));
    r["impacts"] = impacts_json(ev.result.impacts, model.method());
    r["inventory_impacts"] = impacts_json(ev.result.inventory_impacts, model.method());
    r["carbon_ledger"] = ledger_json(ev.result.ledger);

    json hotspots = json::object();
    for (const auto key : kAllCategories) {
        json rows = json::array();
        for (const auto& c : ranked(ev.contributions[index_of(key)])) {
            json row = node_json(graph, c.process);
            row["value"] = c.value;
            row["fraction"] = c.fraction;
            rows.push_back(std::move(row));
        }
        hotspots[cat(key)] = std::move(rows);
    }
    r["hotspots"] = std::move(hotspots);

    json processes = json::array();
    for (std::size_t j = 0; j < ev.system.processes.size(); ++j) {
        json row = node_json(graph, ev.system.processes[j]);
        row["scaling"] = ev.solution.s(static_cast<Eigen::Index>(j));
        processes.push_back(std::move(row));
    }
    r["processes"] = std::move(processes);

    json uncovered = json::array();
    for (const auto& u : ev.uncovered) {
        uncovered.push_back({{"flow", u.flow.label()}, {"amount", u.amount}});
    }
    r["coverage"] = {{"uncovered", std::move(uncovered)}};
    r["solver"] = {{"kind", std::string(to_string(ev.solution.solver))},
                   {"dimension", ev.system.size()},
                   {"condition_estimate", optional_number(ev.solution.condition_estimate)},
                   {"residual", ev.solution.residual}};
    r["warnings"] = ev.warnings;
    return r;
}

json compare_report(const std::vector<CompareEntry>& entries, std::optional<std::size_t> reference,
                    const ImpactMethod& method, const EvaluationOptions& options, const ReportMetadata& meta) {
    json r;
    r["kind"] = "compare";
    r["metadata"] = metadata_json(meta);
    r["allocation"] = std::string(to_string(options.allocation));
    r["reference"] = reference ? json(entries.at(*reference).scenario.id.str()) : json(nullptr);
    json units = json::object();
    for (const auto key : kAllCategories) units[cat(key)] = method.unit(key);
    r["units"] = std::move(units);
    json rows = json::array();
    for (const auto& e : entries) {
        json row = scenario_header(e.scenario);
        json values = json::object();
        json normalized = json::object();
        for (const auto key : kAllCategories) {
            const double v = e.result.impacts[index_of(key)];
            values[cat(key)] = v;
            if (reference) {
                const double ref = entries[*reference].result.impacts[index_of(key)];
                normalized[cat(key)] = ref != 0.0 ? json(v / ref) : json(nullptr);
            }
        }
        row["values"] = std::move(values);
        if (reference) row["normalized"] = std::move(normalized);
        row["carbon_ledger"] = ledger_json(e.result.ledger);
        rows.push_back(std::move(row));
    }
    r["rows"] = std::move(rows);
    return r;
}

json hotspots_report(const ScenarioModel& model, const Evaluation& ev, ImpactCategoryKey category, std::size_t top,
                     const ReportMetadata& meta) {
    const auto& graph = model.graph();
    const auto& method = model.method();
    json r;
    r["kind"] = "hotspots";
    r["metadata"] = metadata_json(meta);
    r["scenario"] = scenario_header(ev.scenario);
    r["allocation"] = std::string(to_string(ev.options.allocation));
    r["category"] = cat(category);
    r["unit"] = method.unit(category);
    const auto& contributions = ev.contributions[index_of(category)];
    double total = 0.0;
    for (const auto& c : contributions) total += c.value;
    r["total"] = total;
    json rows = json::array();
    const auto sorted = ranked(contributions);
    for (std::size_t i = 0; i < sorted.size() && i < top; ++i) {
        json row = node_json(graph, sorted[i].process);
        row["rank"] = i + 1;
        row["value"] = sorted[i].value;
        row["fraction"] = sorted[i].fraction;
        row["unit"] = method.unit(category);
        rows.push_back(std::move(row));
    }
    r["rows"] = std::move(rows);
    return r;
}

json mc_report(const ScenarioModel& model, const McResult& mc, const McConfig& config,
               const std::optional<Sensitivity>& sens, const ReportMetadata& meta) {
    json r;
    r["kind"] = "mc";
    r["metadata"] = metadata_json(meta);
    r["scenario"] = scenario_header(model.graph().scenario);
    r["allocation"] = std::string(to_string(model.options().allocation));
    r["n_runs"] = config.n_runs;
    r["successful_runs"] = mc.runs();
    r["failed_runs"] = mc.failed_runs;
    const RunResult base = model.evaluate();
    json summary = json::array();
    for (const auto key : kAllCategories) {
        const auto& s = mc.summary[index_of(key)];
        summary.push_back({{"category", cat(key)},
                           {"unit", model.method().unit(key)},
                           {"deterministic", base.impacts[index_of(key)]},
                           {"mean", s.mean},
                           {"sd", s.sd},
                           {"p2_5", s.p2_5},
                           {"p50", s.p50},
                           {"p97_5", s.p97_5}});
    }
    r["summary"] = std::move(summary);
    json params = json::array();
    for (std::size_t i = 0; i < mc.parameter_ids.size(); ++i) {
        json p{{"id", mc.parameter_ids[i]}};
        if (sens) {
            json rocc = json::object(), ctv = json::object();
            for (const auto key : kAllCategories) {
                rocc[cat(key)] = sens->records[i].rocc[index_of(key)];
                ctv[cat(key)] = sens->records[i].ctv[index_of(key)];
            }
            p["rocc"] = std::move(rocc);
            p["ctv"] = std::move(ctv);
        }
        params.push_back(std::move(p));
    }
    r["parameters"] = std::move(params);
    return r;
}

json gsa_report(const std::string& case_id, const std::string& title, const GsaResult& result,
                const GsaConfig& config, const ReportMetadata& meta) {
    json r;
    r["kind"] = "gsa";
    r["metadata"] = metadata_json(meta);
    r["case"] = {{"id", case_id}, {"title", title}};
    r["n_runs"] = config.n_runs;
    r["ctv_mode"] = std::string(to_string(config.ctv_mode));
    json thresholds = json::object();
    for (const auto key : kAllCategories) {
        const auto& t = result.thresholds[index_of(key)];
        thresholds[cat(key)] = {{"impact", t.impact}, {"ctv", t.ctv}};
    }
    r["thresholds"] = std::move(thresholds);
    json alts = json::array();
    for (const auto& a : result.alternatives) {
        alts.push_back({{"id", a.id},
                        {"label", a.label},
                        {"group", a.group},
                        {"failed_runs", a.failed_runs},
                        {"focus_parameters", a.focus_parameters}});
    }
    r["alternatives"] = std::move(alts);
    json rows = json::array();
    for (const auto& row : result.rows) {
        rows.push_back({{"alternative", row.alternative},
                        {"category", cat(row.category)},
                        {"unit", row.unit},
                        {"mean", row.mean},
                        {"sd", row.sd},
                        {"p2_5", row.p2_5},
                        {"p97_5", row.p97_5},
                        {"normalized_impact", row.normalized_impact},
                        {"ctv", row.ctv},
                        {"quadrant", std::string(to_string(row.quadrant))},
                        {"x", row.ctv},
                        {"y", row.mean}});
    }
    r["rows"] = std::move(rows);
    return r;
}

json calibration_report(const json& rows, const ReportMetadata& meta) {
    json r;
    r["kind"] = "calibrate";
    r["metadata"] = metadata_json(meta);
    r["rows"] = rows;
    bool all = true;
    for (const auto& row : rows) all = all && row.at("pass").get<bool>();
    r["all_pass"] = all;
    return r;
}

OutputFormat parse_format(std::string_view s) {
    if (s == "table") return OutputFormat::table;
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ValidationError("unknown format \"" + std::string(s) + "\"");
}

// ---------------------------------------------------------------------------
// Text renderers

namespace {

std::string num(const json& v) {
    if (v.is_null()) return "n/a";
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
}

std::string csv_field(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    return v.dump();
}

/// Column-aligned text table.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        out << line << '\n';
    }
    return out.str();
}

using Table = std::vector<std::vector<std::string>>;

std::string header_line(const json& r) {
    const auto& m = r.at("metadata");
    std::string s = "# " + m.at("tool").get<std::string>() + " " + m.at("version").get<std::string>() +
                    "  database " + m.at("database").get<std::string>();
    if (!m.at("seed").is_null()) s += "  seed " + m.at("seed").dump();
    return s + "\n";
}

std::string scenario_line(const json& r) {
    const auto& s = r.at("scenario");
    std::string line = "Scenario " + s.at("id").get<std::string>() + " (" + s.at("polymer").get<std::string>();
    if (r.contains("allocation")) line += ", allocation " + r.at("allocation").get<std::string>();
    return line + ")\n";
}

std::string ledger_table(const json& l) {
    const std::string unit = l.at("unit").get<std::string>();
    Table t{{"ledger", "value", "unit"},
            {"process GHG", num(l.at("process_ghg")), unit},
            {"LUC GHG", num(l.at("luc_ghg")), unit},
            {"biogenic credit", num(l.at("biogenic_credit")), unit},
            {"net GHG", num(l.at("net_ghg")), unit}};
    return aligned(t);
}

Table contribution_rows(const json& rows, bool with_rank) {
    Table t;
    t.push_back(with_rank ? std::vector<std::string>{"rank", "process", "kind", "location", "value", "fraction", "unit"}
                          : std::vector<std::string>{"process", "kind", "location", "value", "fraction"});
    for (const auto& row : rows) {
        std::vector<std::string> line;
        if (with_rank) line.push_back(num(row.at("rank")));
        line.push_back(row.at("process").get<std::string>());
        line.push_back(row.value("kind", ""));
        line.push_back(row.value("location", ""));
        line.push_back(num(row.at("value")));
        line.push_back(num(row.at("fraction")));
        if (with_rank) line.push_back(row.value("unit", ""));
        t.push_back(std::move(line));
    }
    return t;
}

std::string render_table(const json& r) {
    const std::string kind = r.at("kind").get<std::string>();
    std::string out = header_line(r);
    if (kind == "evaluate") {
        out += scenario_line(r);
        Table t{{"category", "value", "unit"}};
        for (const auto& row : r.at("impacts")) {
            t.push_back({row.at("category").get<std::string>(), num(row.at("value")), row.at("unit").get<std::string>()});
        }
        out += aligned(t) + "\n" + ledger_table(r.at("carbon_ledger"));
        for (const auto& w : r.at("warnings")) out += "warning: " + w.get<std::string>() + "\n";
        return out;
    }
    if (kind == "compare") {
        const bool normalized = !r.at("reference").is_null();
        if (normalized) out += "normalized to " + r.at("reference").get<std::string>() + "\n";
        Table t;
        std::vector<std::string> head{"scenario", "polymer"};
        std::vector<std::string> units{"", "unit"};
        for (const auto key : kAllCategories) {
            head.push_back(cat(key));
            units.push_back(normalized ? "-" : r.at("units").at(cat(key)).get<std::string>());
        }
        t.push_back(head);
        t.push_back(units);
        for (const auto& row : r.at("rows")) {
            std::vector<std::string> line{row.at("id").get<std::string>(), row.at("polymer").get<std::string>()};
            for (const auto key : kAllCategories) {
                line.push_back(num(row.at(normalized ? "normalized" : "values").at(cat(key))));
            }
            t.push_back(std::move(line));
        }
        return out + aligned(t);
    }
    if (kind == "hotspots") {
        out += scenario_line(r);
        out += r.at("category").get<std::string>() + " total " + num(r.at("total")) + " " +
               r.at("unit").get<std::string>() + "\n";
        return out + aligned(contribution_rows(r.at("rows"), true));
    }
    if (kind == "mc") {
        out += scenario_line(r);
        out += "runs " + num(r.at("successful_runs")) + " of " + num(r.at("n_runs")) + " (failed " +
               num(r.at("failed_runs")) + ")\n";
        Table t{{"category", "deterministic", "mean", "sd", "p2.5", "p50", "p97.5", "unit"}};
        for (const auto& row : r.at("summary")) {
            t.push_back({row.at("category").get<std::string>(), num(row.at("deterministic")), num(row.at("mean")),
                         num(row.at("sd")), num(row.at("p2_5")), num(row.at("p50")), num(row.at("p97_5")),
                         row.at("unit").get<std::string>()});
        }
        return out + aligned(t);
    }
    if (kind == "gsa") {
        out += "GSA case " + r.at("case").at("id").get<std::string>() + ": " +
               r.at("case").at("title").get<std::string>() + "\n";
        Table t{{"alternative", "category", "mean", "unit", "ctv", "quadrant"}};
        for (const auto& row : r.at("rows")) {
            t.push_back({row.at("alternative").get<std::string>(), row.at("category").get<std::string>(),
                         num(row.at("mean")), row.at("unit").get<std::string>(), num(row.at("ctv")),
                         row.at("quadrant").get<std::string>()});
        }
        out += aligned(t) + "\n";
        Table th{{"category", "impact threshold", "ctv threshold"}};
        for (const auto key : kAllCategories) {
            const auto& x = r.at("thresholds").at(cat(key));
            th.push_back({cat(key), num(x.at("impact")), num(x.at("ctv"))});
        }
        return out + aligned(th);
    }
    if (kind == "calibrate") {
        Table t{{"scenario", "category", "target", "computed", "rel.error", "tolerance", "result"}};
        for (const auto& row : r.at("rows")) {
            t.push_back({row.at("scenario").get<std::string>(), row.at("category").get<std::string>(),
                         num(row.at("target")), num(row.at("computed")), num(row.at("relative_error")),
                         num(row.at("tolerance")), row.at("pass").get<bool>() ? "pass" : "FAIL"});
        }
        return out + aligned(t);
    }
    throw ValidationError("cannot render report kind \"" + kind + "\"");
}

std::string csv_line(const std::vector<json>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_field(fields[i]);
    }
    return line + "\n";
}

std::string render_csv(const json& r) {
    const std::string kind = r.at("kind").get<std::string>();
    std::string out;
    if (kind == "evaluate") {
        const auto id = r.at("scenario").at("id");
        out += "scenario,quantity,value,unit\n";
        for (const auto& row : r.at("impacts")) out += csv_line({id, row.at("category"), row.at("value"), row.at("unit")});
        const auto& l = r.at("carbon_ledger");
        for (const char* k : {"process_ghg", "luc_ghg", "biogenic_credit", "net_ghg"}) {
            out += csv_line({id, k, l.at(k), l.at("unit")});
        }
        return out;
    }
    if (kind == "compare") {
        const bool normalized = !r.at("reference").is_null();
        out += normalized ? "scenario,category,value,unit,normalized\n" : "scenario,category,value,unit\n";
        for (const auto& row : r.at("rows")) {
            for (const auto key : kAllCategories) {
                std::vector<json> f{row.at("id"), cat(key), row.at("values").at(cat(key)), r.at("units").at(cat(key))};
                if (normalized) f.push_back(row.at("normalized").at(cat(key)));
                out += csv_line(f);
            }
        }
        return out;
    }
    if (kind == "hotspots") {
        out += "rank,process,kind,location,category,value,fraction,unit\n";
        for (const auto& row : r.at("rows")) {
            out += csv_line({row.at("rank"), row.at("process"), row.value("kind", ""), row.value("location", ""),
                             r.at("category"), row.at("value"), row.at("fraction"), row.at("unit")});
        }
        return out;
    }
    if (kind == "mc") {
        out += "category,deterministic,mean,sd,p2_5,p50,p97_5,unit\n";
        for (const auto& row : r.at("summary")) {
            out += csv_line({row.at("category"), row.at("deterministic"), row.at("mean"), row.at("sd"),
                             row.at("p2_5"), row.at("p50"), row.at("p97_5"), row.at("unit")});
        }
        return out;
    }
    if (kind == "gsa") {
        out += "alternative,category,mean,sd,p2_5,p97_5,normalized_impact,ctv,quadrant,unit\n";
        for (const auto& row : r.at("rows")) {
            out += csv_line({row.at("alternative"), row.at("category"), row.at("mean"), row.at("sd"), row.at("p2_5"),
                             row.at("p97_5"), row.at("normalized_impact"), row.at("ctv"), row.at("quadrant"),
                             row.at("unit")});
        }
        return out;
    }
    if (kind == "calibrate") {
        out += "scenario,category,target,computed,relative_error,tolerance,pass,citation\n";
        for (const auto& row : r.at("rows")) {
            out += csv_line({row.at("scenario"), row.at("category"), row.at("target"), row.at("computed"),
                             row.at("relative_error"), row.at("tolerance"), row.at("pass"), row.at("citation")});
        }
        return out;
    }
    throw ValidationError("cannot render report kind \"" + kind + "\"");
}

}  // namespace

std::string render(const json& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::json: return report.dump(2) + "\n";
        case OutputFormat::csv: return render_csv(report);
        case OutputFormat::table: return render_table(report);
    }
    return {};
}

}  // namespace verdalca
