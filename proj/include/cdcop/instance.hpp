#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdcop/expression.hpp"

namespace cdcop {

using AgentId = int;

/// Each agent owns exactly one variable, so agent ids double as variable ids.
using Assignment = std::vector<double>;

enum class Objective { Min, Max };

struct Domain {
    double lb = 0.0;
    double ub = 0.0;

    double clamp(double x) const { return x < lb ? lb : (x > ub ? ub : x); }
    bool contains(double x) const { return x >= lb && x <= ub; }
    double width() const { return ub - lb; }

    friend bool operator==(const Domain&, const Domain&) = default;
};

struct CostFunction {
    int id = 0;
    std::array<AgentId, 2> scope{0, 0};  // x0 binds scope[0], x1 binds scope[1]
    Expression expr;

    friend bool operator==(const CostFunction&, const CostFunction&) = default;
};

/// A continuous DCOP. `functions` keep their authored sign; for Max instances
/// every cost is negated on evaluation so the solver core always minimizes.
struct CdcopInstance {
    int num_agents = 0;
    std::vector<Domain> domains;
    std::vector<CostFunction> functions;
    Objective objective = Objective::Min;

    /// +1 for Min, -1 for Max. internal = sign * authored.
    double sign() const { return objective == Objective::Max ? -1.0 : 1.0; }
    /// Converts an internal (minimization) cost back to the authored sense.
    double reported(double internal_cost) const { return sign() * internal_cost; }

    friend bool operator==(const CdcopInstance&, const CdcopInstance&) = default;
};

/// Internal cost of function `fn` (index into inst.functions).
double constraint_cost(const CdcopInstance& inst, std::size_t fn, const Assignment& asg);

/// Internal sum over all functions.
double global_cost(const CdcopInstance& inst, const Assignment& asg);

/// Indices of functions whose scope contains `agent`, ascending.
std::vector<std::size_t> incident_functions(const CdcopInstance& inst, AgentId agent);

/// One entry per incident function, from the agent's point of view.
struct Incidence {
    std::size_t function;
    AgentId other;
    int self_slot;  // slot the agent binds in the function's expression
};

std::vector<std::vector<Incidence>> build_incidence(const CdcopInstance& inst);

/// Sorted, de-duplicated constraint-graph neighbors of every agent.
std::vector<std::vector<AgentId>> constraint_neighbors(const CdcopInstance& inst);

std::size_t edge_count(const CdcopInstance& inst);

/// Returns human-readable invariant violations; empty means valid.
std::vector<std::string> validate_instance(const CdcopInstance& inst);

nlohmann::json instance_to_json(const CdcopInstance& inst);
CdcopInstance instance_from_json(const nlohmann::json& doc);

CdcopInstance load_instance(const std::filesystem::path& path);
void save_instance(const CdcopInstance& inst, const std::filesystem::path& path);
std::string serialize_instance(const CdcopInstance& inst);

}  // namespace cdcop
