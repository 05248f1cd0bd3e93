#include "verdalca/allocation.hpp"

#include <numeric>

#include "verdalca/errors.hpp"

namespace verdalca {

namespace {

std::string context(const ProcessDataset& p) { return "process \"" + p.id.str() + "\""; }

/// kg of reference product per reference unit.
double reference_mass(const ProcessDataset& p) {
    const auto factor = conversion_factor(p.reference_product.unit, Unit::kg);
    if (!factor) {
        throw ValidationError(context(p) + ": mass-based allocation needs a mass reference unit, got " +
                              std::string(to_string(p.reference_product.unit)));
    }
    return p.reference_product.amount * *factor;
}

}  // namespace

std::string coproduct_process_id(const ProcessId& parent, const std::string& coproduct) {
    return parent.str() + "::" + coproduct;
}

std::vector<double> allocation_shares(const ProcessDataset& p, AllocationMethod method,
                                      std::vector<std::string>* warnings) {
    if (method == AllocationMethod::substitution) {
        throw ValidationError("allocation_shares is defined for mass and economic allocation only");
    }
    std::vector<double> weights;
    weights.reserve(p.co_products.size() + 1);
    if (method == AllocationMethod::mass) {
        weights.push_back(reference_mass(p));
        for (const auto& c : p.co_products) weights.push_back(c.mass_per_ref_unit);
    } else {
        if (!p.reference_product.price_per_kg) {
            throw ValidationError(context(p) + ": economic allocation needs a reference product price (missing price)");
        }
        weights.push_back(reference_mass(p) * *p.reference_product.price_per_kg);
        for (const auto& c : p.co_products) {
            if (!c.price_per_kg) {
                throw ValidationError(context(p) + ": missing price for co-product \"" + c.name + "\"");
            }
            if (*c.price_per_kg == 0.0 && warnings) {
                warnings->push_back(context(p) + ": co-product \"" + c.name +
                                    "\" has zero price and receives no burden");
            }
            weights.push_back(c.mass_per_ref_unit * *c.price_per_kg);
        }
    }
    for (double w : weights) {
        if (!(w >= 0.0)) throw ValidationError(context(p) + ": negative allocation basis");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) {
        throw ValidationError(context(p) + (method == AllocationMethod::mass ? ": all-zero output masses"
                                                                             : ": all outputs have zero value"));
    }
    for (double& w : weights) w /= total;
    return weights;
}

AllocationResult apply_allocation(const ProcessDataset& p, AllocationMethod method) {
    AllocationResult result;
    if (p.co_products.empty()) {
        result.processes.push_back(p);
        return result;
    }

    if (method == AllocationMethod::substitution) {
        ProcessDataset out = p;
        out.co_products.clear();
        for (const auto& c : p.co_products) {
            if (!c.substitute_process) {
                throw ValidationError(context(p) + ": missing substitute process for co-product \"" + c.name + "\"");
            }
            Exchange avoided;
            avoided.target = *c.substitute_process;
            avoided.amount = c.mass_per_ref_unit == 0.0 ? 0.0 : -c.mass_per_ref_unit;
            avoided.direction = Direction::input;
            out.exchanges.push_back(std::move(avoided));
        }
        result.processes.push_back(std::move(out));
        return result;
    }

    const auto shares = allocation_shares(p, method, &result.warnings);

    auto scaled_child = [&p](double factor) {
        ProcessDataset child = p;
        child.co_products.clear();
        for (auto& e : child.exchanges) {
            e.amount *= factor;
            e.uncertainty = FixedDist{};
        }
        return child;
    };

    // Reference child: per reference unit, so the factor is the share itself.
    result.processes.push_back(scaled_child(shares[0]));
    for (std::size_t k = 0; k < p.co_products.size(); ++k) {
        const auto& c = p.co_products[k];
        if (c.mass_per_ref_unit == 0.0) continue;  // nothing produced, nothing to carry
        auto child = scaled_child(shares[k + 1] / c.mass_per_ref_unit);
        child.id = ProcessId(coproduct_process_id(p.id, c.name));
        child.name = p.name + " (" + c.name + ")";
        child.reference_product = ReferenceProduct{c.name, Unit::kg, 1.0, c.price_per_kg, FixedDist{}};
        result.processes.push_back(std::move(child));
    }
    return result;
}

}  // namespace verdalca
