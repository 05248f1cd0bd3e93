#include "verdalca/gsa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "verdalca/errors.hpp"

namespace verdalca {

using nlohmann::json;

std::string_view to_string(Quadrant q) {
    switch (q) {
        case Quadrant::I: return "I";
        case Quadrant::II: return "II";
        case Quadrant::III: return "III";
        case Quadrant::IV: return "IV";
    }
    return "?";
}

Quadrant classify(double impact, double ctv, const Thresholds& t) {
    const bool high_impact = impact > t.impact;
    const bool high_ctv = ctv > t.ctv;
    if (high_impact && high_ctv) return Quadrant::IV;
    if (high_impact) return Quadrant::II;
    if (high_ctv) return Quadrant::III;
    return Quadrant::I;
}

const GsaRow& GsaResult::row(std::string_view alternative, ImpactCategoryKey key) const {
    for (const auto& r : rows) {
        if (r.alternative == alternative && r.category == key) return r;
    }
    throw ReferenceError(std::string(alternative), "GSA result");
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.5);
}

}  // namespace

void reclassify(GsaResult& result, const std::array<std::optional<Thresholds>, kCategoryCount>& thresholds) {
    for (const auto key : kAllCategories) {
        const std::size_t c = index_of(key);
        std::vector<double> impacts, ctvs;
        double max_abs = 0.0;
        for (const auto& r : result.rows) {
            if (r.category != key) continue;
            impacts.push_back(r.mean);
            ctvs.push_back(r.ctv);
            max_abs = std::max(max_abs, std::abs(r.mean));
        }
        if (thresholds[c]) {
            result.thresholds[c] = *thresholds[c];
        } else {
            if (impacts.size() < 2) {
                throw ValidationError("quadrant thresholds default to medians and need at least 2 alternatives");
            }
            result.thresholds[c] = Thresholds{median(impacts), median(ctvs)};
        }
        for (auto& r : result.rows) {
            if (r.category != key) continue;
            r.normalized_impact = max_abs > 0.0 ? r.mean / max_abs : 0.0;
            r.quadrant = classify(r.mean, r.ctv, result.thresholds[c]);
        }
    }
}

GsaResult gsa_case(const ProcessDatabase& db, const std::vector<GsaAlternative>& alternatives,
                   const GsaConfig& config, const GsaProgressFn& progress) {
    const bool all_explicit = std::all_of(config.thresholds.begin(), config.thresholds.end(),
                                          [](const auto& t) { return t.has_value(); });
    if (alternatives.size() < 2 && !all_explicit) {
        throw ValidationError("a GSA needs at least 2 alternatives (or explicit thresholds for every category)");
    }
    if (alternatives.empty()) throw ValidationError("a GSA needs at least one alternative");
    if (config.n_runs < 2) throw ValidationError("a GSA needs n_runs >= 2");
    {
        std::set<std::string> ids;
        for (const auto& a : alternatives) {
            if (!ids.insert(a.id).second) throw DuplicateIdError(a.id);
        }
    }

    GsaResult result;
    for (std::size_t a = 0; a < alternatives.size(); ++a) {
        const auto& alt = alternatives[a];
        const ProcessDatabase variant = apply_overrides(db, alt.overrides);
        const ScenarioModel model(variant, alt.scenario, alt.options);

        McConfig mc_config;
        mc_config.n_runs = config.n_runs;
        mc_config.seed = config.seed;
        mc_config.workers = config.workers;
        ProgressFn on_run;
        if (progress) on_run = [&progress, a](std::size_t done, std::size_t total) { progress(a, done, total); };
        const McResult mc = run_mc(model, mc_config, on_run);

        GsaAlternativeResult info;
        info.id = alt.id;
        info.label = alt.label;
        info.group = alt.group;
        info.failed_runs = mc.failed_runs;
        info.sensitivity = sensitivity(mc, config.ctv_mode);

        const std::set<ProcessId> focus(alt.focus.begin(), alt.focus.end());
        std::array<double, kCategoryCount> aggregate{};
        for (std::size_t i = 0; i < model.parameters().size(); ++i) {
            const auto& prm = model.parameters()[i];
            if (!focus.empty() && !focus.count(prm.process)) continue;
            info.focus_parameters.push_back(prm.id);
            for (std::size_t c = 0; c < kCategoryCount; ++c) aggregate[c] += info.sensitivity.records[i].ctv[c];
        }

        for (const auto key : kAllCategories) {
            const std::size_t c = index_of(key);
            const auto& s = mc.summary[c];
            GsaRow row;
            row.alternative = alt.id;
            row.category = key;
            row.unit = model.method().unit(key);
            row.mean = s.mean;
            row.sd = s.sd;
            row.p2_5 = s.p2_5;
            row.p97_5 = s.p97_5;
            row.ctv = aggregate[c];
            result.rows.push_back(std::move(row));
        }
        result.alternatives.push_back(std::move(info));
    }
    reclassify(result, config.thresholds);
    return result;
}

// ---------------------------------------------------------------------------

GsaAlternative alternative_from_json(const json& j, const ProcessDatabase& db, std::size_t position) {
    if (!j.is_object()) throw ValidationError("alternative " + std::to_string(position) + " must be an object");
    static const std::set<std::string> known{"id",      "label", "group", "scenario", "allocation",
                                             "biogenic_basis", "overrides", "focus", "mc"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ValidationError("alternative " + std::to_string(position) + ": unknown key \"" + key + "\"");
    }
    GsaAlternative alt;
    try {
        const auto& sc = j.at("scenario");
        if (sc.is_string()) {
            alt.scenario = db.scenario(sc.get<std::string>());
        } else {
            alt.scenario = scenario_from_json(sc);
            validate_scenario(alt.scenario, db);
        }
        alt.id = j.contains("id") ? j.at("id").get<std::string>()
                                  : alt.scenario.id.str() + "#" + std::to_string(position);
        alt.label = j.value("label", alt.id);
        alt.group = j.value("group", std::string{});
        if (j.contains("allocation")) alt.options.allocation = parse_allocation(j.at("allocation").get<std::string>());
        if (j.contains("biogenic_basis")) {
            alt.options.biogenic = parse_biogenic_basis(j.at("biogenic_basis").get<std::string>());
        }
        if (j.contains("overrides")) alt.overrides = overrides_from_json(j.at("overrides"));
        if (j.contains("focus")) {
            for (const auto& f : j.at("focus")) {
                ProcessId pid(f.get<std::string>());
                db.process(pid);
                alt.focus.push_back(std::move(pid));
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError("alternative " + std::to_string(position) + ": " + e.what());
    }
    return alt;
}

void apply_default_focus(std::vector<GsaAlternative>& alternatives, const ProcessDatabase& db) {
    bool mixed_allocation = false;
    for (const auto& a : alternatives) {
        mixed_allocation = mixed_allocation || a.options.allocation != alternatives.front().options.allocation;
    }
    // One shared set, so the reference alternative is judged on the same
    // processes its variants change.
    std::set<ProcessId> focus;
    for (const auto& alt : alternatives) {
        for (const auto& [path, o] : alt.overrides) {
            const ProcessId pid(path.substr(0, path.find('/')));
            focus.insert(pid);
            auto it = db.processes.find(pid);
            if (it == db.processes.end()) continue;
            const auto loc = locate(it->second, path);
            if (loc.kind != ParameterKind::exchange) continue;
            const auto& target = it->second.exchanges[loc.index].target;
            if (const auto* p = std::get_if<ProcessId>(&target)) focus.insert(*p);
        }
        if (mixed_allocation) {
            const auto graph = resolve_scenario(alt.scenario, db, alt.options.allocation);
            for (const auto& node : graph.nodes) {
                if (!node.source.co_products.empty()) focus.insert(node.source.id);
            }
        }
    }
    for (auto& alt : alternatives) {
        if (alt.focus.empty()) alt.focus.assign(focus.begin(), focus.end());
    }
}

std::vector<GsaCase> load_gsa_cases(const json& document, const ProcessDatabase& db) {
    std::vector<GsaCase> out;
    try {
        for (const auto& c : document.at("cases")) {
            GsaCase gc;
            gc.id = c.at("id").get<std::string>();
            gc.title = c.value("title", gc.id);
            gc.description = c.value("description", std::string{});
            std::size_t k = 0;
            for (const auto& a : c.at("alternatives")) gc.alternatives.push_back(alternative_from_json(a, db, k++));
            apply_default_focus(gc.alternatives, db);
            for (const auto& prev : out) {
                if (prev.id == gc.id) throw DuplicateIdError(gc.id);
            }
            out.push_back(std::move(gc));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("GSA case document: ") + e.what());
    }
    return out;
}

std::vector<GsaCase> load_gsa_cases_file(const std::filesystem::path& path, const ProcessDatabase& db) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return load_gsa_cases(doc, db);
}

}  // namespace verdalca
