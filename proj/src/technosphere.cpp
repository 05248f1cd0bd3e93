#include "verdalca/technosphere.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include <Eigen/SparseLU>

#include "verdalca/errors.hpp"
#include "verdalca/scenario.hpp"

namespace verdalca {

std::size_t TechnosphereSystem::process_index(const ProcessId& id) const {
    for (std::size_t j = 0; j < processes.size(); ++j) {
        if (processes[j] == id) return j;
    }
    throw ReferenceError(id.str(), "technosphere system");
}

TechnosphereSystem assemble(std::span<const ProcessDataset> processes, const std::set<FlowId>& regionalized) {
    TechnosphereSystem sys;
    const auto n = static_cast<Eigen::Index>(processes.size());
    std::unordered_map<std::string, Eigen::Index> column;
    sys.processes.reserve(processes.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& p = processes[static_cast<std::size_t>(j)];
        if (!column.emplace(p.id.str(), j).second) throw DuplicateIdError(p.id.str());
        sys.processes.push_back(p.id);
    }

    // Rows of B are known only after a pass over the exchanges; keep them sorted.
    std::map<InventoryKey, Eigen::Index> rows;
    for (const auto& p : processes) {
        for (const auto& e : p.exchanges) {
            const auto* flow = std::get_if<FlowId>(&e.target);
            if (!flow) continue;
            rows.emplace(InventoryKey{*flow, regionalized.count(*flow) ? p.location.code() : std::string{}}, 0);
        }
    }
    Eigen::Index r = 0;
    for (auto& [key, row] : rows) {
        row = r++;
        sys.flows.push_back(key);
    }

    std::vector<Eigen::Triplet<double>> a, b;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& p = processes[static_cast<std::size_t>(j)];
        a.emplace_back(j, j, p.reference_product.amount);
        for (const auto& e : p.exchanges) {
            const double sign = e.direction == Direction::output ? 1.0 : -1.0;
            if (const auto* flow = std::get_if<FlowId>(&e.target)) {
                const InventoryKey key{*flow, regionalized.count(*flow) ? p.location.code() : std::string{}};
                b.emplace_back(rows.at(key), j, sign * e.amount);
                continue;
            }
            const std::string target = target_string(e.target);
            auto it = column.find(target);
            if (it == column.end()) {
                throw SingularSystemError("product of \"" + target + "\" consumed by \"" + p.id.str() +
                                              "\" is produced by no process (structurally singular)",
                                          std::numeric_limits<double>::infinity());
            }
            a.emplace_back(it->second, j, sign * e.amount);
        }
    }
    sys.A.resize(n, n);
    sys.A.setFromTriplets(a.begin(), a.end());
    sys.B.resize(static_cast<Eigen::Index>(sys.flows.size()), n);
    sys.B.setFromTriplets(b.begin(), b.end());
    sys.A.makeCompressed();
    sys.B.makeCompressed();
    return sys;
}

TechnosphereSystem assemble(const ScenarioGraph& graph) {
    return assemble(graph.allocated, graph.regionalized_flows);
}

SolverKind choose_solver(std::size_t n) { return n < kDenseThreshold ? SolverKind::dense : SolverKind::sparse; }

std::string_view to_string(SolverKind k) { return k == SolverKind::dense ? "dense-lu" : "sparse-lu"; }

namespace {

double norm1(const Eigen::SparseMatrix<double>& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.outerSize(); ++j) {
        double col = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it) col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

/// Hager's estimate of ||A^-1||_1 from solves with A and A^T.
template <class Solve, class SolveT>
double inverse_norm1_estimate(Eigen::Index n, Solve solve_a, SolveT solve_at) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double estimate = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        const Eigen::VectorXd y = solve_a(x);
        estimate = y.lpNorm<1>();
        const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
        const Eigen::VectorXd z = solve_at(xi);
        Eigen::Index j = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&j);
        if (zmax <= z.dot(x)) break;
        x.setZero();
        x(j) = 1.0;
    }
    return estimate;
}

[[noreturn]] void singular(const std::string& why, double cond) {
    std::ostringstream msg;
    msg << "technosphere matrix is singular or ill-conditioned (" << why << ", condition estimate " << cond << ")";
    throw SingularSystemError(msg.str(), cond);
}

}  // namespace

InventorySolution solve(const TechnosphereSystem& sys, const Eigen::VectorXd& f) {
    return solve(sys, f, choose_solver(sys.size()));
}

InventorySolution solve(const TechnosphereSystem& sys, const Eigen::VectorXd& f, SolverKind kind) {
    const Eigen::Index n = sys.A.rows();
    if (f.size() != n) throw ValidationError("demand vector has the wrong dimension");
    InventorySolution sol;
    sol.solver = kind;
    if (n == 0) {
        sol.s = Eigen::VectorXd(0);
        sol.g = Eigen::VectorXd::Zero(sys.B.rows());
        return sol;
    }

    if (kind == SolverKind::dense) {
        const Eigen::MatrixXd dense(sys.A);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
        const double rcond = lu.rcond();
        sol.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        if (!std::isfinite(sol.condition_estimate) || sol.condition_estimate > kMaxCondition) {
            singular("dense LU", sol.condition_estimate);
        }
        sol.s = lu.solve(f);
    } else {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(sys.A);
        if (lu.info() != Eigen::Success) singular("sparse LU: " + lu.lastErrorMessage(),
                                                  std::numeric_limits<double>::infinity());
        Eigen::SparseMatrix<double> at = sys.A.transpose();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lut;
        lut.compute(at);
        if (lut.info() != Eigen::Success) singular("sparse LU of transpose", std::numeric_limits<double>::infinity());
        const double inv = inverse_norm1_estimate(
            n, [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(lu.solve(v)); },
            [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(lut.solve(v)); });
        sol.condition_estimate = norm1(sys.A) * inv;
        if (!std::isfinite(sol.condition_estimate) || sol.condition_estimate > kMaxCondition) {
            singular("sparse LU", sol.condition_estimate);
        }
        sol.s = lu.solve(f);
    }

    const double fnorm = f.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd r = sys.A * sol.s - f;
    sol.residual = r.lpNorm<Eigen::Infinity>() / (fnorm > 0.0 ? fnorm : 1.0);
    if (!sol.s.allFinite() || sol.residual > kResidualTolerance) {
        singular("residual " + std::to_string(sol.residual), sol.condition_estimate);
    }
    sol.g = sys.B * sol.s;
    return sol;
}

}  // namespace verdalca
