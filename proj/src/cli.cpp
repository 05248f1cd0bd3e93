#include "verdalca/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "verdalca/errors.hpp"
#include "verdalca/workflows.hpp"

namespace verdalca {

using nlohmann::json;

namespace {

struct Options {
    std::string db;
    std::vector<std::string> scenarios;
    std::string allocation = "substitution";
    std::string biogenic = "stoichiometric";
    std::string category = "GWP";
    std::size_t runs = 1000;
    std::uint64_t seed = 42;
    std::string format = "table";
    std::size_t top = 10;
    std::string reference;
    std::string overrides;
    std::string case_id;
};

Workspace open_workspace(const Options& o) {
    return Workspace::open(o.db.empty() ? std::nullopt : std::optional<std::filesystem::path>(o.db));
}

EvaluationOptions evaluation_options(const Options& o) {
    return {parse_allocation(o.allocation), parse_biogenic_basis(o.biogenic)};
}

const std::string& single_scenario(const Options& o) {
    if (o.scenarios.size() != 1) throw ValidationError("exactly one --scenario is required");
    return o.scenarios.front();
}

Overrides read_overrides(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open overrides file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (j.is_object() && j.contains("overrides")) return overrides_from_json(j.at("overrides"));
    return overrides_from_json(j);
}

json cmd_evaluate(const Options& o) {
    const Workspace ws = open_workspace(o);
    EvaluationRequest req;
    req.scenario = ws.db.scenario(single_scenario(o));
    req.options = evaluation_options(o);
    req.overrides = read_overrides(o.overrides);
    return run_evaluation(ws, req);
}

json cmd_compare(const Options& o) {
    if (o.scenarios.empty()) throw ValidationError("compare needs at least one --scenario");
    const Workspace ws = open_workspace(o);
    const ProcessDatabase db = apply_overrides(ws.db, read_overrides(o.overrides));
    const EvaluationOptions opts = evaluation_options(o);
    std::vector<std::string> ids = o.scenarios;
    std::optional<std::size_t> ref;
    if (!o.reference.empty()) {
        auto it = std::find(ids.begin(), ids.end(), o.reference);
        if (it == ids.end()) it = ids.insert(ids.end(), o.reference);
        ref = static_cast<std::size_t>(it - ids.begin());
    }
    std::vector<CompareEntry> entries;
    std::optional<ImpactMethod> method;
    for (const auto& id : ids) {
        const ScenarioModel model(db, db.scenario(id), opts);
        if (!method) method = model.method();
        entries.push_back({model.graph().scenario, model.evaluate()});
    }
    return compare_report(entries, ref, *method, opts, ws.metadata());
}

json cmd_hotspots(const Options& o) {
    const Workspace ws = open_workspace(o);
    const ProcessDatabase db = apply_overrides(ws.db, read_overrides(o.overrides));
    const ScenarioModel model(db, db.scenario(single_scenario(o)), evaluation_options(o));
    if (o.top < 1) throw ValidationError("--top must be at least 1");
    return hotspots_report(model, model.evaluate_detailed(), parse_category(o.category), o.top, ws.metadata());
}

json cmd_mc(const Options& o) {
    const Workspace ws = open_workspace(o);
    if (o.runs < 1) throw ValidationError("--runs must be at least 1");
    const ProcessDatabase db = apply_overrides(ws.db, read_overrides(o.overrides));
    const ScenarioModel model(db, db.scenario(single_scenario(o)), evaluation_options(o));
    McConfig cfg;
    cfg.n_runs = o.runs;
    cfg.seed = o.seed;
    const McResult mc = run_mc(model, cfg);
    std::optional<Sensitivity> sens;
    if (mc.runs() >= 2 && !mc.parameter_ids.empty()) sens = sensitivity(mc);
    return mc_report(model, mc, cfg, sens, ws.metadata(o.seed));
}

json cmd_gsa(const Options& o) {
    const Workspace ws = open_workspace(o);
    if (o.runs < 2) throw ValidationError("--runs must be at least 2");
    return run_gsa(ws, gsa_request_for_case(ws, o.case_id, o.runs, o.seed));
}

json cmd_calibrate(const Options& o, bool& all_pass) {
    const Workspace ws = open_workspace(o);
    const auto targets = ws.calibration_targets();
    if (targets.empty()) throw InputError("no calibration targets in " + (ws.data_dir / "calibration.json").string());
    const auto rows = verify_calibration(ws.db, targets, evaluation_options(o));
    all_pass = std::all_of(rows.begin(), rows.end(), [](const CalibrationRow& r) { return r.pass; });
    return calibration_report(calibration_rows_json(rows), ws.metadata());
}

json cmd_scenarios(const Options& o) {
    const Workspace ws = open_workspace(o);
    json r;
    r["kind"] = "scenarios";
    r["metadata"] = metadata_json(ws.metadata());
    r["scenarios"] = json::array();
    for (const auto& s : ws.db.scenarios) {
        r["scenarios"].push_back(json{{"id", s.id.str()}, {"name", s.name}});
    }
    return r;
}

std::string render_any(const json& report, OutputFormat format) {
    if (report.at("kind") != "scenarios" || format == OutputFormat::json) return render(report, format);
    std::string out = format == OutputFormat::csv ? "id,name\n" : "";
    for (const auto& s : report.at("scenarios")) {
        out += s.at("id").get<std::string>() + (format == OutputFormat::csv ? "," : "  ") +
               s.at("name").get<std::string>() + "\n";
    }
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Life cycle assessment and global sensitivity analysis for PET supply chains", "verdalca"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--db", o.db, "Process database (default: $VERDALCA_DATA/database.json)");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--allocation", o.allocation, "Multi-output handling")
            ->check(CLI::IsMember({"substitution", "mass", "economic"}));
        sub->add_option("--biogenic-basis", o.biogenic, "Biogenic credit basis")
            ->check(CLI::IsMember({"stoichiometric", "reference_table"}));
        sub->add_option("--overrides", o.overrides, "JSON file mapping parameter paths to values");
    };

    auto* evaluate = app.add_subcommand("evaluate", "Impacts and carbon ledger of one scenario");
    add_common(evaluate);
    add_model(evaluate);
    evaluate->add_option("--scenario", o.scenarios, "Scenario id")->required();

    auto* compare = app.add_subcommand("compare", "Scenario by category matrix");
    add_common(compare);
    add_model(compare);
    compare->add_option("--scenario", o.scenarios, "Scenario id (repeatable)");
    compare->add_option("--reference", o.reference, "Normalize to this scenario");

    auto* hotspots = app.add_subcommand("hotspots", "Process contributions for one category");
    add_common(hotspots);
    add_model(hotspots);
    hotspots->add_option("--scenario", o.scenarios, "Scenario id")->required();
    hotspots->add_option("--category", o.category, "Impact category key");
    hotspots->add_option("--top", o.top, "Number of processes to show");

    auto* mc = app.add_subcommand("mc", "Monte Carlo uncertainty propagation");
    add_common(mc);
    add_model(mc);
    mc->add_option("--scenario", o.scenarios, "Scenario id")->required();
    mc->add_option("--runs", o.runs, "Number of runs");
    mc->add_option("--seed", o.seed, "Random seed");

    auto* gsa = app.add_subcommand("gsa", "Global sensitivity comparison of a bundled case");
    add_common(gsa);
    gsa->add_option("case", o.case_id, "Case id")->required();
    gsa->add_option("--runs", o.runs, "Monte Carlo runs per alternative");
    gsa->add_option("--seed", o.seed, "Random seed");

    auto* calibrate = app.add_subcommand("calibrate", "Check the database against its calibration targets");
    add_common(calibrate);
    calibrate->add_option("--allocation", o.allocation, "Multi-output handling")
        ->check(CLI::IsMember({"substitution", "mass", "economic"}));

    auto* scenarios = app.add_subcommand("scenarios", "List scenarios");
    add_common(scenarios);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const OutputFormat format = parse_format(o.format);
        json report;
        int code = 0;
        if (evaluate->parsed()) {
            report = cmd_evaluate(o);
        } else if (compare->parsed()) {
            report = cmd_compare(o);
        } else if (hotspots->parsed()) {
            report = cmd_hotspots(o);
        } else if (mc->parsed()) {
            report = cmd_mc(o);
        } else if (gsa->parsed()) {
            report = cmd_gsa(o);
        } else if (calibrate->parsed()) {
            bool pass = true;
            report = cmd_calibrate(o, pass);
            code = pass ? 0 : 1;
        } else {
            report = cmd_scenarios(o);
        }
        out << render_any(report, format);
        return code;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ComputeError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace verdalca
