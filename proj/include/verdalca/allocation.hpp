#pragma once

#include <string>
#include <vector>

#include "verdalca/types.hpp"

namespace verdalca {

struct AllocationResult {
    /// Single-output datasets. The first keeps the parent id and reference
    /// product; co-product children are named "<parent>::<co-product>".
    std::vector<ProcessDataset> processes;
    std::vector<std::string> warnings;
};

/// Output shares for mass or economic allocation, reference product first.
/// Shares are >= 0 and sum to 1.
std::vector<double> allocation_shares(const ProcessDataset& p, AllocationMethod method,
                                      std::vector<std::string>* warnings = nullptr);

/// Splits a multi-output process into single-output processes.
///
/// Mass and economic allocation scale every exchange by the output's share
/// divided by its output quantity, so summing the children weighted by their
/// outputs reproduces the parent. Substitution keeps one process and adds a
/// negative input of each co-product's substitute equal to the co-product
/// mass. Processes without co-products are returned unchanged.
AllocationResult apply_allocation(const ProcessDataset& p, AllocationMethod method);

std::string coproduct_process_id(const ProcessId& parent, const std::string& coproduct);

}  // namespace verdalca
