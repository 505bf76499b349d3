#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "cdcop/instance.hpp"
#include "cdcop/solver.hpp"

namespace cdcop {

/// Centralized fitness of a full assignment; the independent check for the
/// root's distributed aggregate.
inline double centralized_fitness(const CdcopInstance& inst, const Assignment& asg) { return global_cost(inst, asg); }

/// Sum over agents of their incident-function costs, halved. Equal to
/// global_cost by double counting; computed the slow way on purpose.
double halved_local_sum(const CdcopInstance& inst, const Assignment& asg);

struct GridSearchSpec {
    int points_per_dim = 21;
    int max_dims = 6;
};

inline constexpr std::uint64_t kMaxGridPoints = 10'000'000;

struct GridOptimum {
    Assignment assignment;
    double cost = 0.0;  // internal sign
};

/// Exhaustive search over an evenly spaced lattice including the bounds.
/// Ties resolve to the lexicographically smallest assignment.
/// Throws TooLarge past max_dims or kMaxGridPoints.
GridOptimum grid_optimum(const CdcopInstance& inst, const GridSearchSpec& spec);

/// Index of the first entry that increases over its predecessor, if any.
std::optional<std::size_t> check_anytime(std::span<const double> internal_costs);
std::optional<std::size_t> check_anytime(const RunTrace& trace);

/// |a - b| <= tol * max(1, |a|, |b|).
bool nearly_equal(double a, double b, double tol);

}  // namespace cdcop
