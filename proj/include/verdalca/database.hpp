#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "verdalca/types.hpp"

namespace verdalca {

/// Immutable after loading; safe to share between threads.
class ProcessDatabase {
public:
    std::map<FlowId, ElementaryFlow> flows;
    std::map<ProcessId, ProcessDataset> processes;
    std::vector<ImpactCategory> impact_methods;
    std::vector<ScenarioDefinition> scenarios;  ///< document order
    std::vector<LucFactor> luc_factors;
    std::vector<PolymerComposition> polymer_compositions;

    const ProcessDataset& process(const ProcessId& id) const;  // throws ReferenceError
    const ElementaryFlow& flow(const FlowId& id) const;        // throws ReferenceError
    const ScenarioDefinition& scenario(std::string_view id) const;
    const ScenarioDefinition* find_scenario(std::string_view id) const;
    const ImpactCategory* category(ImpactCategoryKey key) const;
    const PolymerComposition& composition() const;

    /// Flows that carry a region-specific factor in a regionalized category.
    /// Their inventory rows are split by the emitting process's location.
    std::set<FlowId> regionalized_flows() const;

    bool operator==(const ProcessDatabase&) const = default;
};

ProcessDatabase load_database(std::istream& source);
ProcessDatabase load_database_string(std::string_view document);
ProcessDatabase load_database_file(const std::filesystem::path& path);

/// Parses an already-decoded document; schema and references are enforced.
ProcessDatabase database_from_json(const nlohmann::json& document);

nlohmann::json serialize_database(const ProcessDatabase& db);

/// Structural checks shared by the loader and by inline scenarios sent to the service.
/// Uncertainty, self-consumption and co-product checks for one process.
void validate_process(const ProcessDataset& p, const ProcessDatabase& db);
void validate_scenario(const ScenarioDefinition& scenario, const ProcessDatabase& db);
ScenarioDefinition scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioDefinition& s);

/// Database process that provides one tonne-kilometre of the given mode.
std::string transport_process_name(TransportMode mode);

nlohmann::json uncertainty_to_json(const UncertaintySpec& spec);
UncertaintySpec uncertainty_from_json(const nlohmann::json& j);

/// 64-bit FNV-1a, used for database fingerprints and random-stream keys.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fingerprint_hex(std::string_view bytes);

}  // namespace verdalca
