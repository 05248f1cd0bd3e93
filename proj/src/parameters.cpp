#include "verdalca/parameters.hpp"

#include <cmath>
#include <unordered_map>

#include "verdalca/errors.hpp"

namespace verdalca {

using nlohmann::json;

std::vector<std::string> exchange_paths(const ProcessDataset& p) {
    std::unordered_map<std::string, int> seen;
    std::vector<std::string> out;
    out.reserve(p.exchanges.size());
    for (const auto& e : p.exchanges) {
        const std::string target = target_string(e.target);
        const int k = seen[target]++;
        std::string path = p.id.str() + "/" + target;
        if (k > 0) path += "#" + std::to_string(k);
        out.push_back(std::move(path));
    }
    return out;
}

std::string coproduct_path(const ProcessDataset& p, std::size_t k, ParameterKind kind) {
    return p.id.str() + "/co_products/" + p.co_products.at(k).name +
           (kind == ParameterKind::coproduct_price ? "/price" : "/mass");
}

std::string reference_price_path(const ProcessDataset& p) { return p.id.str() + "/reference_product/price"; }

ParameterLocator locate(const ProcessDataset& p, const std::string& path) {
    const std::string prefix = p.id.str() + "/";
    auto fail = [&path](const std::string& why) -> ParameterLocator {
        throw ValidationError("override path \"" + path + "\": " + why);
    };
    if (path.compare(0, prefix.size(), prefix) != 0) return fail("does not belong to process " + p.id.str());
    const std::string rest = path.substr(prefix.size());

    if (rest == "reference_product/price") {
        if (!p.reference_product.price_per_kg) return fail("reference product has no price");
        return {ParameterKind::reference_price, 0};
    }
    constexpr std::string_view kCo = "co_products/";
    if (rest.compare(0, kCo.size(), kCo) == 0) {
        const auto slash = rest.rfind('/');
        const std::string name = rest.substr(kCo.size(), slash - kCo.size());
        const std::string field = rest.substr(slash + 1);
        for (std::size_t k = 0; k < p.co_products.size(); ++k) {
            if (p.co_products[k].name != name) continue;
            if (field == "mass") return {ParameterKind::coproduct_mass, k};
            if (field == "price") {
                if (!p.co_products[k].price_per_kg) return fail("co-product has no price");
                return {ParameterKind::coproduct_price, k};
            }
            return fail("unknown co-product field \"" + field + "\"");
        }
        return fail("no co-product named \"" + name + "\"");
    }

    const auto paths = exchange_paths(p);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (paths[i] == path || paths[i] + "#0" == path) return {ParameterKind::exchange, i};
    }
    return fail("no exchange with that target");
}

double parameter_value(const ProcessDataset& p, const ParameterLocator& loc) {
    switch (loc.kind) {
        case ParameterKind::exchange: return p.exchanges.at(loc.index).amount;
        case ParameterKind::coproduct_mass: return p.co_products.at(loc.index).mass_per_ref_unit;
        case ParameterKind::coproduct_price: return p.co_products.at(loc.index).price_per_kg.value_or(0.0);
        case ParameterKind::reference_price: return p.reference_product.price_per_kg.value_or(0.0);
    }
    return 0.0;
}

void set_parameter_value(ProcessDataset& p, const ParameterLocator& loc, double value) {
    switch (loc.kind) {
        case ParameterKind::exchange: p.exchanges.at(loc.index).amount = value; break;
        case ParameterKind::coproduct_mass: p.co_products.at(loc.index).mass_per_ref_unit = value; break;
        case ParameterKind::coproduct_price: p.co_products.at(loc.index).price_per_kg = value; break;
        case ParameterKind::reference_price: p.reference_product.price_per_kg = value; break;
    }
}

const UncertaintySpec& parameter_uncertainty(const ProcessDataset& p, const ParameterLocator& loc) {
    switch (loc.kind) {
        case ParameterKind::exchange: return p.exchanges.at(loc.index).uncertainty;
        case ParameterKind::coproduct_mass: return p.co_products.at(loc.index).mass_uncertainty;
        case ParameterKind::coproduct_price: return p.co_products.at(loc.index).price_uncertainty;
        case ParameterKind::reference_price: break;
    }
    return p.reference_product.price_uncertainty;
}

void set_parameter_uncertainty(ProcessDataset& p, const ParameterLocator& loc, UncertaintySpec spec) {
    switch (loc.kind) {
        case ParameterKind::exchange: p.exchanges.at(loc.index).uncertainty = std::move(spec); break;
        case ParameterKind::coproduct_mass: p.co_products.at(loc.index).mass_uncertainty = std::move(spec); break;
        case ParameterKind::coproduct_price: p.co_products.at(loc.index).price_uncertainty = std::move(spec); break;
        case ParameterKind::reference_price: p.reference_product.price_uncertainty = std::move(spec); break;
    }
}

Overrides overrides_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("overrides must be an object keyed by parameter path");
    Overrides out;
    for (const auto& [path, value] : j.items()) {
        ParameterOverride o;
        try {
            if (value.is_number()) {
                o.amount = value.get<double>();
            } else if (value.is_object()) {
                for (const auto& [key, v] : value.items()) {
                    if (key != "amount" && key != "uncertainty") {
                        throw ValidationError("unknown key \"" + key + "\"");
                    }
                }
                if (value.contains("amount")) o.amount = value.at("amount").get<double>();
                if (value.contains("uncertainty")) o.uncertainty = uncertainty_from_json(value.at("uncertainty"));
                if (!o.amount && !o.uncertainty) throw ValidationError("needs \"amount\" or \"uncertainty\"");
            } else {
                throw ValidationError("must be a number or an object");
            }
        } catch (const json::exception& e) {
            throw ValidationError("override path \"" + path + "\": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("override path \"" + path + "\": " + e.what());
        }
        if (o.amount && !std::isfinite(*o.amount)) {
            throw ValidationError("override path \"" + path + "\": amount is not finite");
        }
        out.emplace(path, std::move(o));
    }
    return out;
}

json overrides_to_json(const Overrides& o) {
    json j = json::object();
    for (const auto& [path, value] : o) {
        if (value.amount && !value.uncertainty) {
            j[path] = *value.amount;
            continue;
        }
        json v = json::object();
        if (value.amount) v["amount"] = *value.amount;
        if (value.uncertainty) v["uncertainty"] = uncertainty_to_json(*value.uncertainty);
        j[path] = std::move(v);
    }
    return j;
}

ProcessDatabase apply_overrides(const ProcessDatabase& db, const Overrides& overrides) {
    if (overrides.empty()) return db;
    ProcessDatabase out = db;
    for (const auto& [path, o] : overrides) {
        const auto slash = path.find('/');
        if (slash == std::string::npos || slash == 0) {
            throw ValidationError("override path \"" + path + "\": expected <process>/<parameter>");
        }
        const ProcessId pid(path.substr(0, slash));
        auto it = out.processes.find(pid);
        if (it == out.processes.end()) {
            throw ValidationError("override path \"" + path + "\": unknown process \"" + pid.str() + "\"");
        }
        const auto loc = locate(it->second, path);
        if (o.amount) set_parameter_value(it->second, loc, *o.amount);
        if (o.uncertainty) set_parameter_uncertainty(it->second, loc, *o.uncertainty);
        if (auto problem = check_uncertainty(parameter_uncertainty(it->second, loc),
                                             parameter_value(it->second, loc))) {
            throw ValidationError("override path \"" + path + "\": " + *problem);
        }
    }
    for (const auto& [id, p] : out.processes) validate_process(p, out);
    return out;
}

}  // namespace verdalca
