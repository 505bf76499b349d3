#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cdcop/instance.hpp"
#include "cdcop/pseudo_tree.hpp"
#include "cdcop/runtime.hpp"
#include "cdcop/swarm.hpp"

namespace cdcop {

struct CycleRecord {
    int cycle = 0;
    double g_best_cost = 0.0;  // internal (minimization) sign
    Assignment g_best_assignment;
    CycleStats stats;
    long long hops = 0;       // cumulative
    double elapsed_ms = 0.0;  // cumulative wall clock
};

/// The anytime curve of one run.
struct RunTrace {
    Objective objective = Objective::Min;
    std::vector<CycleRecord> cycles;
    Assignment best_assignment;

    double sign() const { return objective == Objective::Max ? -1.0 : 1.0; }
    /// Best cost in the instance's own sense.
    double best_cost() const { return cycles.empty() ? 0.0 : sign() * cycles.back().g_best_cost; }
    std::vector<double> internal_costs() const;
    std::vector<double> reported_costs() const;
};

struct CrossoverDraw {
    int a = 0;
    int b = 1;
    double r = 0.5;
};

/// Replaces the per-agent random draws, for reproducing hand-worked traces.
struct DrawOverride {
    std::function<std::pair<double, double>(AgentId, int cycle)> coefficients;  // (r1, r2)
    std::function<std::optional<CrossoverDraw>(AgentId, int cycle)> crossover;
};

/// PCD / PCD_CrossOver over the synchronous runtime. One LocalSwarm per agent;
/// agents share nothing and coordinate only through VALUE/COST/BEST messages.
///
/// Per-agent randomness comes from three streams seeded by
/// derive_seed({seed, agent, label}) for initialization, (r1, r2), and
/// crossover, so toggling crossover leaves the other draws untouched.
class PcdSolver {
public:
    PcdSolver(const CdcopInstance& inst, const PseudoTree& tree, SwarmConfig cfg);
    ~PcdSolver();
    PcdSolver(const PcdSolver&) = delete;
    PcdSolver& operator=(const PcdSolver&) = delete;

    /// One cycle: VALUE, EVALUATION, BEST_UPDATE, [CROSSOVER], VARIABLE_UPDATE.
    const CycleRecord& step();

    /// Runs until max_cycles and returns the trace.
    const RunTrace& run();

    int cycle() const;
    const RunTrace& trace() const;
    const SwarmConfig& config() const;

    const LocalSwarm& swarm(AgentId agent) const;
    /// Mutable access for seeding hand-picked positions before the first step.
    LocalSwarm& swarm_mut(AgentId agent);
    const GcpsoControl& control(AgentId agent) const;
    const BestPayload& last_best(AgentId agent) const;
    std::optional<CrossoverDraw> last_crossover(AgentId agent) const;

    /// Particle k's full position, gathered from every agent's slice.
    Assignment particle_position(int k) const;
    Assignment particle_best_position(int k) const;

    void set_draw_override(DrawOverride draws);
    void set_message_log(std::ostream* log);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Runs a fresh solver for cfg.max_cycles cycles.
RunTrace solve(const CdcopInstance& inst, const PseudoTree& tree, const SwarmConfig& cfg);

}  // namespace cdcop
