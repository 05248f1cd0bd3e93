#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "verdalca/types.hpp"

namespace verdalca {

struct ScenarioGraph;

/// Inventory row: an elementary flow, split by the emitting process's
/// location when the flow is regionalized (region empty otherwise).
struct InventoryKey {
    FlowId flow;
    std::string region;

    auto operator<=>(const InventoryKey&) const = default;
    bool operator==(const InventoryKey&) const = default;
    std::string label() const { return region.empty() ? flow.str() : flow.str() + "@" + region; }
};

struct TechnosphereSystem {
    std::vector<ProcessId> processes;  ///< column j of A and B
    std::vector<InventoryKey> flows;   ///< row k of B, sorted
    Eigen::SparseMatrix<double> A;     ///< products x processes, +1 diagonal
    Eigen::SparseMatrix<double> B;     ///< flows x processes, outputs +, inputs -

    std::size_t size() const { return processes.size(); }
    std::size_t process_index(const ProcessId& id) const;  // throws ReferenceError
};

/// Builds A and B from single-output datasets whose reference amount is 1.
/// Throws SingularSystemError when a consumed product has no producer.
TechnosphereSystem assemble(std::span<const ProcessDataset> processes, const std::set<FlowId>& regionalized);
TechnosphereSystem assemble(const ScenarioGraph& graph);

enum class SolverKind { dense, sparse };
inline constexpr std::size_t kDenseThreshold = 64;
SolverKind choose_solver(std::size_t n);
std::string_view to_string(SolverKind);

struct InventorySolution {
    Eigen::VectorXd s;  ///< scaling vector
    Eigen::VectorXd g;  ///< inventory, aligned with TechnosphereSystem::flows
    double residual = 0.0;            ///< ||A s - f||inf / ||f||inf
    double condition_estimate = 1.0;  ///< 1-norm condition number estimate
    SolverKind solver = SolverKind::dense;
};

/// Solves A s = f with dense partial-pivot LU below kDenseThreshold and
/// sparse LU above. Throws SingularSystemError with a condition estimate.
InventorySolution solve(const TechnosphereSystem& sys, const Eigen::VectorXd& f);
InventorySolution solve(const TechnosphereSystem& sys, const Eigen::VectorXd& f, SolverKind forced);

inline constexpr double kMaxCondition = 1e12;
inline constexpr double kResidualTolerance = 1e-9;

}  // namespace verdalca
