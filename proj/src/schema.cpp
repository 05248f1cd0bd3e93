#include "verdalca/schema.hpp"

#include <regex>

#include "verdalca/errors.hpp"

namespace verdalca::schema {

extern const char* const kEmbeddedDatabaseSchema;

namespace {

bool type_matches(const std::string& type, const nlohmann::json& v) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "number") return v.is_number();
    if (type == "integer") {
        return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
    }
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    return false;
}

std::string escape_pointer(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

}  // namespace

Validator::Validator(nlohmann::json schema) : root_(std::move(schema)) {}

std::vector<std::string> Validator::validate(const nlohmann::json& instance) const {
    std::vector<std::string> errors;
    check(root_, instance, "", errors);
    return errors;
}

const nlohmann::json& Validator::resolve(const nlohmann::json& schema) const {
    const auto ref = schema.find("$ref");
    if (ref == schema.end()) return schema;
    const auto text = ref->get<std::string>();
    if (text.rfind("#/", 0) != 0) throw ParseError("unsupported schema reference " + text);
    const auto& target = root_.at(nlohmann::json::json_pointer(text.substr(1)));
    return resolve(target);
}

void Validator::check(const nlohmann::json& raw_schema, const nlohmann::json& v, const std::string& path,
                      std::vector<std::string>& errors) const {
    const auto& s = resolve(raw_schema);
    const std::string where = path.empty() ? "/" : path;

    if (auto it = s.find("type"); it != s.end()) {
        bool ok = false;
        if (it->is_array()) {
            for (const auto& t : *it) ok = ok || type_matches(t.get<std::string>(), v);
        } else {
            ok = type_matches(it->get<std::string>(), v);
        }
        if (!ok) {
            errors.push_back(where + ": expected type " + it->dump());
            return;
        }
    }
    if (auto it = s.find("const"); it != s.end() && *it != v) {
        errors.push_back(where + ": expected constant " + it->dump());
    }
    if (auto it = s.find("enum"); it != s.end()) {
        bool found = false;
        for (const auto& e : *it) found = found || e == v;
        if (!found) errors.push_back(where + ": value " + v.dump() + " not in " + it->dump());
    }
    if (v.is_number()) {
        const double x = v.get<double>();
        if (auto it = s.find("minimum"); it != s.end() && x < it->get<double>()) {
            errors.push_back(where + ": " + v.dump() + " is below minimum " + it->dump());
        }
        if (auto it = s.find("exclusiveMinimum"); it != s.end() && !(x > it->get<double>())) {
            errors.push_back(where + ": " + v.dump() + " must exceed " + it->dump());
        }
        if (auto it = s.find("maximum"); it != s.end() && x > it->get<double>()) {
            errors.push_back(where + ": " + v.dump() + " is above maximum " + it->dump());
        }
    }
    if (v.is_string()) {
        if (auto it = s.find("pattern"); it != s.end()) {
            if (!std::regex_search(v.get<std::string>(), std::regex(it->get<std::string>()))) {
                errors.push_back(where + ": " + v.dump() + " does not match " + it->dump());
            }
        }
    }
    if (v.is_object()) {
        if (auto it = s.find("required"); it != s.end()) {
            for (const auto& key : *it) {
                if (!v.contains(key.get<std::string>())) {
                    errors.push_back(where + ": missing required key " + key.dump());
                }
            }
        }
        const auto props = s.find("properties");
        const auto extra = s.find("additionalProperties");
        for (const auto& [key, value] : v.items()) {
            const std::string child = path + "/" + escape_pointer(key);
            if (props != s.end() && props->contains(key)) {
                check(props->at(key), value, child, errors);
            } else if (extra != s.end()) {
                if (extra->is_boolean()) {
                    if (!extra->get<bool>()) errors.push_back(child + ": unexpected key");
                } else {
                    check(*extra, value, child, errors);
                }
            }
        }
    }
    if (v.is_array()) {
        if (auto it = s.find("minItems"); it != s.end() && v.size() < it->get<std::size_t>()) {
            errors.push_back(where + ": expected at least " + it->dump() + " items");
        }
        if (auto it = s.find("items"); it != s.end()) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                check(*it, v[i], path + "/" + std::to_string(i), errors);
            }
        }
    }
    if (auto it = s.find("allOf"); it != s.end()) {
        for (const auto& sub : *it) check(sub, v, path, errors);
    }
    if (auto it = s.find("oneOf"); it != s.end()) {
        std::size_t matches = 0;
        for (const auto& sub : *it) {
            std::vector<std::string> sub_errors;
            check(sub, v, path, sub_errors);
            if (sub_errors.empty()) ++matches;
        }
        if (matches != 1) {
            errors.push_back(where + ": must match exactly one alternative (matched " +
                             std::to_string(matches) + ")");
        }
    }
}

const nlohmann::json& database_schema() {
    static const nlohmann::json schema = nlohmann::json::parse(kEmbeddedDatabaseSchema);
    return schema;
}

}  // namespace verdalca::schema
