#include "cdcop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdcop/errors.hpp"

namespace cdcop {

double halved_local_sum(const CdcopInstance& inst, const Assignment& asg) {
    double total = 0.0;
    for (AgentId a = 0; a < inst.num_agents; ++a) {
        for (std::size_t fn : incident_functions(inst, a)) total += constraint_cost(inst, fn, asg);
    }
    return total / 2.0;
}

GridOptimum grid_optimum(const CdcopInstance& inst, const GridSearchSpec& spec) {
    if (spec.points_per_dim < 2) throw ConfigError("grid search needs at least 2 points per dimension");
    const int dims = inst.num_agents;
    if (dims > spec.max_dims) {
        throw TooLarge("grid search over " + std::to_string(dims) + " agents exceeds max_dims " +
                       std::to_string(spec.max_dims));
    }
    std::uint64_t total = 1;
    for (int d = 0; d < dims; ++d) {
        total *= static_cast<std::uint64_t>(spec.points_per_dim);
        if (total > kMaxGridPoints) throw TooLarge("grid search exceeds " + std::to_string(kMaxGridPoints) + " points");
    }

    const auto points = static_cast<std::size_t>(spec.points_per_dim);
    std::vector<std::vector<double>> axis(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) {
        const Domain& dom = inst.domains[static_cast<std::size_t>(d)];
        auto& ax = axis[static_cast<std::size_t>(d)];
        for (std::size_t i = 0; i < points; ++i) {
            ax.push_back(i + 1 == points ? dom.ub
                                         : dom.lb + dom.width() * static_cast<double>(i) / static_cast<double>(points - 1));
        }
    }

    // Odometer with dimension 0 most significant: visits points in
    // lexicographic order, so strict < keeps the smallest tie.
    std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
    Assignment asg(static_cast<std::size_t>(dims));
    GridOptimum best;
    best.cost = std::numeric_limits<double>::infinity();
    for (std::uint64_t step = 0; step < total; ++step) {
        for (std::size_t d = 0; d < idx.size(); ++d) asg[d] = axis[d][idx[d]];
        const double cost = global_cost(inst, asg);
        if (cost < best.cost) {
            best.cost = cost;
            best.assignment = asg;
        }
        for (std::size_t d = idx.size(); d-- > 0;) {
            if (++idx[d] < points) break;
            idx[d] = 0;
        }
    }
    return best;
}

std::optional<std::size_t> check_anytime(std::span<const double> internal_costs) {
    for (std::size_t i = 1; i < internal_costs.size(); ++i) {
        if (internal_costs[i] > internal_costs[i - 1]) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> check_anytime(const RunTrace& trace) {
    const auto costs = trace.internal_costs();
    return check_anytime(costs);
}

bool nearly_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace cdcop
