#include "verdalca/database.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "verdalca/errors.hpp"
#include "verdalca/schema.hpp"

namespace verdalca {

using nlohmann::json;

namespace {

constexpr std::string_view kStagePrefix = "stage:";

double finite_number(const json& j, const char* key, const std::string& context) {
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw ValidationError(context + ": \"" + key + "\" is not finite");
    return v;
}

UncertaintySpec optional_uncertainty(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? UncertaintySpec{FixedDist{}} : uncertainty_from_json(*it);
}

void require_valid(const UncertaintySpec& spec, double base, const std::string& context) {
    if (auto problem = check_uncertainty(spec, base)) {
        throw ValidationError(context + ": " + *problem);
    }
}

ElementaryFlow flow_from_json(const json& j) {
    ElementaryFlow f;
    f.id = FlowId(j.at("id").get<std::string>());
    f.name = j.at("name").get<std::string>();
    f.compartment = parse_compartment(j.at("compartment").get<std::string>());
    f.unit = parse_unit(j.at("unit").get<std::string>());
    return f;
}

struct RawExchange {
    std::string target;
    std::optional<Unit> unit;
    Exchange exchange;
};

struct RawProcess {
    ProcessDataset process;
    std::vector<RawExchange> exchanges;
};

RawProcess process_from_json(const json& j) {
    RawProcess raw;
    auto& p = raw.process;
    p.id = ProcessId(j.at("id").get<std::string>());
    const std::string ctx = "process \"" + p.id.str() + "\"";
    p.name = j.at("name").get<std::string>();
    p.location = Region::parse(j.at("location").get<std::string>());
    const auto& ref = j.at("reference_product");
    p.reference_product.name = ref.at("name").get<std::string>();
    p.reference_product.unit = parse_unit(ref.at("unit").get<std::string>());
    p.reference_product.amount = finite_number(ref, "amount", ctx);
    if (ref.contains("price_per_kg")) p.reference_product.price_per_kg = ref.at("price_per_kg").get<double>();
    p.reference_product.price_uncertainty = optional_uncertainty(ref, "price_uncertainty");
    for (const auto& e : j.at("exchanges")) {
        RawExchange r;
        r.target = e.at("target").get<std::string>();
        r.exchange.amount = finite_number(e, "amount", ctx);
        r.exchange.direction = parse_direction(e.at("direction").get<std::string>());
        r.exchange.uncertainty = optional_uncertainty(e, "uncertainty");
        if (e.contains("unit")) r.unit = parse_unit(e.at("unit").get<std::string>());
        raw.exchanges.push_back(std::move(r));
    }
    if (j.contains("co_products")) {
        for (const auto& c : j.at("co_products")) {
            CoProduct cp;
            cp.name = c.at("name").get<std::string>();
            cp.mass_per_ref_unit = finite_number(c, "mass_per_ref_unit", ctx);
            if (c.contains("price_per_kg")) cp.price_per_kg = c.at("price_per_kg").get<double>();
            if (c.contains("substitute_process")) {
                cp.substitute_process = ProcessId(c.at("substitute_process").get<std::string>());
            }
            cp.mass_uncertainty = optional_uncertainty(c, "mass_uncertainty");
            cp.price_uncertainty = optional_uncertainty(c, "price_uncertainty");
            p.co_products.push_back(std::move(cp));
        }
    }
    p.calibrated = j.value("calibrated", false);
    p.notes = j.value("notes", std::string{});
    return raw;
}

ImpactCategory category_from_json(const json& j) {
    ImpactCategory c;
    c.key = parse_category(j.at("key").get<std::string>());
    c.name = j.at("name").get<std::string>();
    c.unit = j.at("unit").get<std::string>();
    c.regionalized = j.value("regionalized", false);
    for (const auto& f : j.at("factors")) {
        CharacterizationFactor cf;
        cf.flow = FlowId(f.at("flow").get<std::string>());
        cf.factor = finite_number(f, "factor", "category " + std::string(to_string(c.key)));
        if (f.contains("region")) cf.region = Region::parse(f.at("region").get<std::string>());
        c.factors.push_back(std::move(cf));
    }
    return c;
}

LucFactor luc_from_json(const json& j) {
    LucFactor l;
    l.feedstock = j.at("feedstock").get<std::string>();
    l.debit_30 = finite_number(j, "debit_30", "luc factor " + l.feedstock);
    l.debit_100 = finite_number(j, "debit_100", "luc factor " + l.feedstock);
    return l;
}

PolymerComposition composition_from_json(const json& j) {
    PolymerComposition c;
    c.id = j.at("id").get<std::string>();
    c.repeat_unit_carbons = j.at("repeat_unit_carbons").get<int>();
    c.glycol_carbons = j.at("glycol_carbons").get<int>();
    c.acid_carbons = j.at("acid_carbons").get<int>();
    c.repeat_unit_molar_mass = j.at("repeat_unit_molar_mass").get<double>();
    if (j.contains("reference_credits")) {
        const auto& r = j.at("reference_credits");
        if (r.contains("pet30")) c.reference_credit_30 = r.at("pet30").get<double>();
        if (r.contains("pet100")) c.reference_credit_100 = r.at("pet100").get<double>();
    }
    if (c.glycol_carbons + c.acid_carbons != c.repeat_unit_carbons) {
        throw ValidationError("polymer composition \"" + c.id +
                              "\": glycol and acid carbons must add up to the repeat-unit carbons");
    }
    return c;
}

/// Additive-scale parameters follow the amount; lognormal gsd is scale-free.
void scale_spec(UncertaintySpec& spec, double factor) {
    std::visit(
        [factor](auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, NormalDist>) {
                d.sd *= std::abs(factor);
            } else if constexpr (std::is_same_v<D, UniformDist>) {
                d.lo *= factor;
                d.hi *= factor;
            } else if constexpr (std::is_same_v<D, TriangularDist>) {
                d.lo *= factor;
                d.mode *= factor;
                d.hi *= factor;
            }
        },
        spec);
}

void scale_exchange(Exchange& e, double factor) {
    e.amount *= factor;
    scale_spec(e.uncertainty, factor);
}

/// Rescales a process so its reference amount is exactly 1.
void normalize_reference(ProcessDataset& p) {
    const double scale = p.reference_product.amount;
    if (scale == 1.0) return;
    for (auto& e : p.exchanges) scale_exchange(e, 1.0 / scale);
    for (auto& c : p.co_products) {
        c.mass_per_ref_unit /= scale;
        scale_spec(c.mass_uncertainty, 1.0 / scale);
    }
    p.reference_product.amount = 1.0;
}

}  // namespace

// ---------------------------------------------------------------------------

void validate_process(const ProcessDataset& p, const ProcessDatabase& db) {
    const std::string ctx = "process \"" + p.id.str() + "\"";
    require_valid(p.reference_product.price_uncertainty, p.reference_product.price_per_kg.value_or(0.0),
                  ctx + " reference price");
    for (const auto& e : p.exchanges) {
        require_valid(e.uncertainty, e.amount, ctx + " exchange \"" + target_string(e.target) + "\"");
        if (const auto* target = std::get_if<ProcessId>(&e.target); target && *target == p.id) {
            throw ValidationError(ctx + ": a process cannot consume its own reference product");
        }
    }
    for (const auto& c : p.co_products) {
        const std::string cctx = ctx + " co-product \"" + c.name + "\"";
        if (!(c.mass_per_ref_unit >= 0.0)) throw ValidationError(cctx + ": mass must be >= 0");
        require_valid(c.mass_uncertainty, c.mass_per_ref_unit, cctx + " mass");
        require_valid(c.price_uncertainty, c.price_per_kg.value_or(0.0), cctx + " price");
        if (!c.price_per_kg && !c.substitute_process) {
            throw ValidationError(cctx + ": needs a price, a substitute process, or both");
        }
        if (c.substitute_process) {
            if (!db.processes.contains(*c.substitute_process)) {
                throw ReferenceError(c.substitute_process->str(), cctx);
            }
            if (*c.substitute_process == p.id) {
                throw ValidationError(cctx + ": cannot substitute its own producer");
            }
        }
    }
}


UncertaintySpec uncertainty_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "fixed") return FixedDist{};
    if (kind == "lognormal") return LognormalDist{j.at("gsd").get<double>()};
    if (kind == "normal") return NormalDist{j.at("sd").get<double>()};
    if (kind == "uniform") return UniformDist{j.at("lo").get<double>(), j.at("hi").get<double>()};
    if (kind == "triangular") {
        return TriangularDist{j.at("lo").get<double>(), j.at("mode").get<double>(), j.at("hi").get<double>()};
    }
    throw ValidationError("unknown uncertainty kind \"" + kind + "\"");
}

json uncertainty_to_json(const UncertaintySpec& spec) {
    json j;
    j["kind"] = std::string(uncertainty_kind(spec));
    if (const auto* ln = std::get_if<LognormalDist>(&spec)) j["gsd"] = ln->gsd;
    if (const auto* n = std::get_if<NormalDist>(&spec)) j["sd"] = n->sd;
    if (const auto* u = std::get_if<UniformDist>(&spec)) {
        j["lo"] = u->lo;
        j["hi"] = u->hi;
    }
    if (const auto* t = std::get_if<TriangularDist>(&spec)) {
        j["lo"] = t->lo;
        j["mode"] = t->mode;
        j["hi"] = t->hi;
    }
    return j;
}

ScenarioDefinition scenario_from_json(const json& j) {
    ScenarioDefinition s;
    s.id = ScenarioId(j.at("id").get<std::string>());
    s.name = j.value("name", s.id.str());
    s.polymer = parse_polymer(j.at("polymer").get<std::string>());
    for (const auto& st : j.at("stages")) {
        Stage stage;
        stage.role = parse_stage_role(st.at("role").get<std::string>());
        stage.process = ProcessId(st.at("process").get<std::string>());
        stage.location = Region::parse(st.at("location").get<std::string>());
        s.stages.push_back(std::move(stage));
    }
    if (j.contains("transport")) {
        for (const auto& t : j.at("transport")) {
            TransportLink link;
            link.from = parse_stage_role(t.at("from").get<std::string>());
            link.to = parse_stage_role(t.at("to").get<std::string>());
            link.mode = parse_transport_mode(t.at("mode").get<std::string>());
            link.distance_km = t.at("distance_km").get<double>();
            link.payload = t.at("payload").get<double>();
            s.transport.push_back(link);
        }
    }
    s.luc_feedstock_key = j.value("luc_feedstock_key", std::string{});
    s.notes = j.value("notes", std::string{});
    return s;
}

json scenario_to_json(const ScenarioDefinition& s) {
    json j;
    j["id"] = s.id.str();
    j["name"] = s.name;
    j["polymer"] = std::string(to_string(s.polymer));
    j["stages"] = json::array();
    for (const auto& st : s.stages) {
        j["stages"].push_back({{"role", std::string(to_string(st.role))},
                               {"process", st.process.str()},
                               {"location", st.location.code()}});
    }
    j["transport"] = json::array();
    for (const auto& t : s.transport) {
        j["transport"].push_back({{"from", std::string(to_string(t.from))},
                                  {"to", std::string(to_string(t.to))},
                                  {"mode", std::string(to_string(t.mode))},
                                  {"distance_km", t.distance_km},
                                  {"payload", t.payload}});
    }
    j["luc_feedstock_key"] = s.luc_feedstock_key;
    if (!s.notes.empty()) j["notes"] = s.notes;
    return j;
}

void validate_scenario(const ScenarioDefinition& s, const ProcessDatabase& db) {
    const std::string ctx = "scenario \"" + s.id.str() + "\"";
    std::set<StageRole> seen;
    for (const auto& st : s.stages) {
        if (!seen.insert(st.role).second) {
            throw ValidationError(ctx + ": stage \"" + std::string(to_string(st.role)) + "\" bound twice");
        }
        if (!db.processes.contains(st.process)) throw ReferenceError(st.process.str(), ctx);
    }
    for (StageRole role : required_stages(s.polymer)) {
        if (!seen.contains(role)) {
            throw ValidationError(ctx + ": missing stage \"" + std::string(to_string(role)) + "\" for polymer " +
                                  std::string(to_string(s.polymer)));
        }
    }
    for (const auto& link : s.transport) {
        if (!seen.contains(link.from) || !seen.contains(link.to) || link.from == link.to) {
            throw ValidationError(ctx + ": transport link " + std::string(to_string(link.from)) + "->" +
                                  std::string(to_string(link.to)) + " does not join two bound stages");
        }
        if (!(link.distance_km >= 0.0) || !(link.payload > 0.0)) {
            throw ValidationError(ctx + ": transport distance must be >= 0 and payload > 0");
        }
        const ProcessId mode_process(transport_process_name(link.mode));
        if (!db.processes.contains(mode_process)) throw ReferenceError(mode_process.str(), ctx);
    }
    if (s.polymer != Polymer::fossil) {
        if (s.luc_feedstock_key.empty()) throw ValidationError(ctx + ": luc_feedstock_key is required");
        bool found = false;
        for (const auto& l : db.luc_factors) found = found || l.feedstock == s.luc_feedstock_key;
        if (!found) throw ReferenceError(s.luc_feedstock_key, ctx + " luc_feedstock_key");
    }
}

std::string transport_process_name(TransportMode mode) {
    return "transport_" + std::string(to_string(mode));
}

ProcessDatabase database_from_json(const json& doc) {
    static const schema::Validator validator(schema::database_schema());
    if (auto problems = validator.validate(doc); !problems.empty()) {
        std::string message = "database document violates schema:";
        for (std::size_t i = 0; i < problems.size() && i < 8; ++i) message += "\n  " + problems[i];
        throw ValidationError(message);
    }

    ProcessDatabase db;
    std::set<std::string> ids;
    auto claim = [&ids](const std::string& id) {
        if (!ids.insert(id).second) throw DuplicateIdError(id);
    };

    for (const auto& f : doc.at("flows")) {
        auto flow = flow_from_json(f);
        claim(flow.id.str());
        db.flows.emplace(flow.id, std::move(flow));
    }

    std::vector<RawProcess> raw;
    for (const auto& p : doc.at("processes")) {
        raw.push_back(process_from_json(p));
        claim(raw.back().process.id.str());
    }
    std::map<std::string, Unit> process_units;
    for (const auto& r : raw) process_units.emplace(r.process.id.str(), r.process.reference_product.unit);
    for (auto& r : raw) {
        const std::string ctx = "process \"" + r.process.id.str() + "\"";
        for (auto& re : r.exchanges) {
            auto& e = re.exchange;
            if (re.target.rfind(kStagePrefix, 0) == 0) {
                e.target = StageRef{parse_stage_role(re.target.substr(kStagePrefix.size()))};
                continue;
            }
            Unit target_unit;
            if (auto f = db.flows.find(FlowId(re.target)); f != db.flows.end()) {
                e.target = f->first;
                target_unit = f->second.unit;
            } else if (auto p = process_units.find(re.target); p != process_units.end()) {
                e.target = ProcessId(re.target);
                target_unit = p->second;
            } else {
                throw ReferenceError(re.target, ctx);
            }
            if (re.unit && *re.unit != target_unit) {
                const auto factor = conversion_factor(*re.unit, target_unit);
                if (!factor) {
                    throw ValidationError(ctx + ": exchange \"" + re.target + "\" given in " +
                                          std::string(to_string(*re.unit)) + " but target is in " +
                                          std::string(to_string(target_unit)));
                }
                scale_exchange(e, *factor);
            }
        }
        for (auto& re : r.exchanges) r.process.exchanges.push_back(std::move(re.exchange));
        normalize_reference(r.process);
        db.processes.emplace(r.process.id, std::move(r.process));
    }
    for (const auto& [id, p] : db.processes) validate_process(p, db);

    if (doc.contains("impact_methods")) {
        std::set<ImpactCategoryKey> keys;
        for (const auto& c : doc.at("impact_methods")) {
            auto category = category_from_json(c);
            if (!keys.insert(category.key).second) {
                throw DuplicateIdError(std::string(to_string(category.key)));
            }
            for (const auto& f : category.factors) {
                if (!db.flows.contains(f.flow)) {
                    throw ReferenceError(f.flow.str(), "category " + std::string(to_string(category.key)));
                }
            }
            db.impact_methods.push_back(std::move(category));
        }
    }
    if (doc.contains("luc_factors")) {
        std::set<std::string> keys;
        for (const auto& l : doc.at("luc_factors")) {
            db.luc_factors.push_back(luc_from_json(l));
            if (!keys.insert(db.luc_factors.back().feedstock).second) {
                throw DuplicateIdError(db.luc_factors.back().feedstock);
            }
        }
    }
    if (doc.contains("polymer_compositions")) {
        for (const auto& c : doc.at("polymer_compositions")) {
            db.polymer_compositions.push_back(composition_from_json(c));
        }
    }
    if (doc.contains("scenarios")) {
        std::set<std::string> scenario_ids;
        for (const auto& s : doc.at("scenarios")) {
            auto scenario = scenario_from_json(s);
            if (!scenario_ids.insert(scenario.id.str()).second) throw DuplicateIdError(scenario.id.str());
            validate_scenario(scenario, db);
            db.scenarios.push_back(std::move(scenario));
        }
    }
    return db;
}

ProcessDatabase load_database(std::istream& source) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed database document: ") + e.what());
    }
    return database_from_json(doc);
}

ProcessDatabase load_database_string(std::string_view document) {
    std::istringstream in{std::string(document)};
    return load_database(in);
}

ProcessDatabase load_database_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open database file " + path.string());
    return load_database(in);
}

json serialize_database(const ProcessDatabase& db) {
    json doc;
    doc["flows"] = json::array();
    for (const auto& [id, f] : db.flows) {
        doc["flows"].push_back({{"id", id.str()},
                                {"name", f.name},
                                {"compartment", std::string(to_string(f.compartment))},
                                {"unit", std::string(to_string(f.unit))}});
    }
    doc["processes"] = json::array();
    for (const auto& [id, p] : db.processes) {
        json jp;
        jp["id"] = id.str();
        jp["name"] = p.name;
        jp["location"] = p.location.code();
        json ref = {{"name", p.reference_product.name},
                    {"unit", std::string(to_string(p.reference_product.unit))},
                    {"amount", p.reference_product.amount}};
        if (p.reference_product.price_per_kg) ref["price_per_kg"] = *p.reference_product.price_per_kg;
        if (!is_fixed(p.reference_product.price_uncertainty)) {
            ref["price_uncertainty"] = uncertainty_to_json(p.reference_product.price_uncertainty);
        }
        jp["reference_product"] = ref;
        jp["exchanges"] = json::array();
        for (const auto& e : p.exchanges) {
            json je = {{"target", target_string(e.target)},
                       {"amount", e.amount},
                       {"direction", std::string(to_string(e.direction))}};
            if (!is_fixed(e.uncertainty)) je["uncertainty"] = uncertainty_to_json(e.uncertainty);
            jp["exchanges"].push_back(std::move(je));
        }
        if (!p.co_products.empty()) {
            jp["co_products"] = json::array();
            for (const auto& c : p.co_products) {
                json jc = {{"name", c.name}, {"mass_per_ref_unit", c.mass_per_ref_unit}};
                if (c.price_per_kg) jc["price_per_kg"] = *c.price_per_kg;
                if (c.substitute_process) jc["substitute_process"] = c.substitute_process->str();
                if (!is_fixed(c.mass_uncertainty)) jc["mass_uncertainty"] = uncertainty_to_json(c.mass_uncertainty);
                if (!is_fixed(c.price_uncertainty)) {
                    jc["price_uncertainty"] = uncertainty_to_json(c.price_uncertainty);
                }
                jp["co_products"].push_back(std::move(jc));
            }
        }
        if (p.calibrated) jp["calibrated"] = true;
        if (!p.notes.empty()) jp["notes"] = p.notes;
        doc["processes"].push_back(std::move(jp));
    }
    doc["impact_methods"] = json::array();
    for (const auto& c : db.impact_methods) {
        json jc = {{"key", std::string(to_string(c.key))},
                   {"name", c.name},
                   {"unit", c.unit},
                   {"regionalized", c.regionalized},
                   {"factors", json::array()}};
        for (const auto& f : c.factors) {
            json jf = {{"flow", f.flow.str()}, {"factor", f.factor}};
            if (f.region) jf["region"] = f.region->code();
            jc["factors"].push_back(std::move(jf));
        }
        doc["impact_methods"].push_back(std::move(jc));
    }
    doc["scenarios"] = json::array();
    for (const auto& s : db.scenarios) doc["scenarios"].push_back(scenario_to_json(s));
    doc["luc_factors"] = json::array();
    for (const auto& l : db.luc_factors) {
        doc["luc_factors"].push_back({{"feedstock", l.feedstock}, {"debit_30", l.debit_30}, {"debit_100", l.debit_100}});
    }
    doc["polymer_compositions"] = json::array();
    for (const auto& c : db.polymer_compositions) {
        json jc = {{"id", c.id},
                   {"repeat_unit_carbons", c.repeat_unit_carbons},
                   {"glycol_carbons", c.glycol_carbons},
                   {"acid_carbons", c.acid_carbons},
                   {"repeat_unit_molar_mass", c.repeat_unit_molar_mass}};
        if (c.reference_credit_30 || c.reference_credit_100) {
            json credits = json::object();
            if (c.reference_credit_30) credits["pet30"] = *c.reference_credit_30;
            if (c.reference_credit_100) credits["pet100"] = *c.reference_credit_100;
            jc["reference_credits"] = credits;
        }
        doc["polymer_compositions"].push_back(std::move(jc));
    }
    return doc;
}

// ---------------------------------------------------------------------------

const ProcessDataset& ProcessDatabase::process(const ProcessId& id) const {
    const auto it = processes.find(id);
    if (it == processes.end()) throw ReferenceError(id.str(), "process database");
    return it->second;
}

const ElementaryFlow& ProcessDatabase::flow(const FlowId& id) const {
    const auto it = flows.find(id);
    if (it == flows.end()) throw ReferenceError(id.str(), "flow list");
    return it->second;
}

const ScenarioDefinition* ProcessDatabase::find_scenario(std::string_view id) const {
    for (const auto& s : scenarios) {
        if (s.id.str() == id) return &s;
    }
    return nullptr;
}

const ScenarioDefinition& ProcessDatabase::scenario(std::string_view id) const {
    if (const auto* s = find_scenario(id)) return *s;
    throw ReferenceError(std::string(id), "scenario list");
}

const ImpactCategory* ProcessDatabase::category(ImpactCategoryKey key) const {
    for (const auto& c : impact_methods) {
        if (c.key == key) return &c;
    }
    return nullptr;
}

const PolymerComposition& ProcessDatabase::composition() const {
    if (polymer_compositions.empty()) throw ValidationError("database has no polymer composition");
    return polymer_compositions.front();
}

std::set<FlowId> ProcessDatabase::regionalized_flows() const {
    std::set<FlowId> out;
    for (const auto& c : impact_methods) {
        if (!c.regionalized) continue;
        for (const auto& f : c.factors) {
            if (f.region && !f.region->is_global()) out.insert(f.flow);
        }
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fingerprint_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

}  // namespace verdalca
