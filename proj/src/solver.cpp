#include "cdcop/solver.hpp"

#include <algorithm>
#include <chrono>
#include <tuple>

#include "cdcop/errors.hpp"
#include "cdcop/rng.hpp"

namespace cdcop {

std::vector<double> RunTrace::internal_costs() const {
    std::vector<double> out;
    out.reserve(cycles.size());
    for (const auto& c : cycles) out.push_back(c.g_best_cost);
    return out;
}

std::vector<double> RunTrace::reported_costs() const {
    std::vector<double> out = internal_costs();
    for (double& c : out) c *= sign();
    return out;
}

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kCoefficientStream = 2;
constexpr std::uint64_t kCrossoverStream = 3;

struct IncidentFunction {
    const Expression* expr;
    std::size_t neighbor_slot;  // index into the sorted VALUE messages
    int self_slot;
};

class PcdAgent final : public ProtocolAgent {
public:
    PcdAgent(AgentId id, const CdcopInstance& inst, const PseudoTree& tree, const SwarmConfig& cfg,
             const std::vector<Incidence>& incidence)
        : id_(id),
          inst_(&inst),
          tree_(&tree),
          cfg_(&cfg),
          domain_(inst.domains[static_cast<std::size_t>(id)]),
          coeff_rng_(derive_seed({cfg.seed, static_cast<std::uint64_t>(id), kCoefficientStream})),
          crossover_rng_(derive_seed({cfg.seed, static_cast<std::uint64_t>(id), kCrossoverStream})) {
        Rng init_rng(derive_seed({cfg.seed, static_cast<std::uint64_t>(id), kInitStream}));
        swarm_ = initialize_swarm(domain_, cfg.particles, init_rng);

        const auto& nbrs = tree.neighbors[static_cast<std::size_t>(id)];
        for (const auto& inc : incidence) {
            const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), inc.other);
            functions_.push_back({&inst.functions[inc.function].expr, static_cast<std::size_t>(it - nbrs.begin()),
                                  inc.self_slot});
        }
    }

    std::vector<double> value_payload() override { return swarm_.x; }

    std::vector<double> convergecast(std::span<const Message> values, std::span<const Message> costs) override {
        const std::size_t k_count = swarm_.size();
        const auto& nbrs = tree_->neighbors[static_cast<std::size_t>(id_)];
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i].from != nbrs[i]) throw ProtocolError("VALUE sender mismatch");
        }
        const double sign = inst_->sign();
        std::fill(swarm_.local_fitness.begin(), swarm_.local_fitness.end(), 0.0);
        scratch_.resize(k_count);
        for (const auto& fn : functions_) {
            const std::span<const double> other = values[fn.neighbor_slot].values;
            if (fn.self_slot == 0) {
                fn.expr->evaluate_batch(swarm_.x, other, scratch_);
            } else {
                fn.expr->evaluate_batch(other, swarm_.x, scratch_);
            }
            for (std::size_t k = 0; k < k_count; ++k) swarm_.local_fitness[k] += sign * scratch_[k];
        }
        swarm_.fitness = swarm_.local_fitness;
        for (const auto& msg : costs) {
            for (std::size_t k = 0; k < k_count; ++k) swarm_.fitness[k] += msg.values[k];
        }
        if (tree_->is_root(id_)) {
            for (double& f : swarm_.fitness) f /= 2.0;
        }
        return swarm_.fitness;
    }

    BestPayload broadcast(const Message* from_parent) override {
        if (from_parent) {
            last_best_ = from_parent->best;
            apply_best(swarm_, last_best_);
        } else {
            last_best_ = root_best_update(swarm_);
        }
        return last_best_;
    }

    void finish_cycle() override {
        const bool improved = last_best_.global_best.has_value();
        update_control(ctrl_, improved, *cfg_);
        if (improved) ctrl_.best_particle = last_best_.global_best;

        std::vector<char> frozen;
        last_crossover_.reset();
        if (cfg_->crossover) {
            swarm_.b_p = crossover_probabilities(swarm_.local_fitness);
            std::optional<CrossoverDraw> draw;
            if (draws_ && draws_->crossover) {
                draw = draws_->crossover(id_, ctrl_.t);
            } else {
                const auto [a, b] = select_crossover_pair(swarm_.b_p, crossover_rng_);
                draw = CrossoverDraw{a, b, crossover_rng_.uniform01()};
            }
            if (draw) {
                const bool velocities_crossed = apply_crossover(swarm_, draw->a, draw->b, draw->r);
                if (velocities_crossed) {
                    frozen.assign(swarm_.size(), 0);
                    frozen[static_cast<std::size_t>(draw->a)] = 1;
                    frozen[static_cast<std::size_t>(draw->b)] = 1;
                }
                last_crossover_ = draw;
            }
        }

        double r1 = coeff_rng_.uniform01();
        double r2 = coeff_rng_.uniform01();
        if (draws_ && draws_->coefficients) std::tie(r1, r2) = draws_->coefficients(id_, ctrl_.t);

        VelocityCoefficients coeff;
        coeff.w = inertia_weight(cfg_->inertia, ctrl_.t, cfg_->max_cycles);
        coeff.c1 = cfg_->c1;
        coeff.c2 = cfg_->c2;
        coeff.r1 = r1;
        coeff.r2 = r2;
        coeff.constricted = std::holds_alternative<ConstrictionInertia>(cfg_->inertia);
        variable_update(swarm_, ctrl_, coeff, domain_, frozen);
    }

    AgentId id_;
    const CdcopInstance* inst_;
    const PseudoTree* tree_;
    const SwarmConfig* cfg_;
    Domain domain_;
    Rng coeff_rng_;
    Rng crossover_rng_;
    LocalSwarm swarm_;
    GcpsoControl ctrl_;
    BestPayload last_best_;
    std::optional<CrossoverDraw> last_crossover_;
    std::vector<IncidentFunction> functions_;
    std::vector<double> scratch_;
    const DrawOverride* draws_ = nullptr;
};

}  // namespace

struct PcdSolver::Impl {
    Impl(const CdcopInstance& i, const PseudoTree& t, SwarmConfig c)
        : inst(&i), tree(&t), cfg(std::move(c)), runtime(t, static_cast<std::size_t>(std::max(cfg.particles, 1))) {}

    const CdcopInstance* inst;
    const PseudoTree* tree;
    SwarmConfig cfg;
    Runtime runtime;
    std::vector<std::unique_ptr<PcdAgent>> agents;
    std::vector<ProtocolAgent*> handles;
    DrawOverride draws;
    RunTrace trace;
};

PcdSolver::PcdSolver(const CdcopInstance& inst, const PseudoTree& tree, SwarmConfig cfg) {
    validate_config(cfg);
    if (tree.size() != static_cast<std::size_t>(inst.num_agents)) {
        throw ConfigError("pseudo-tree does not match the instance");
    }
    impl_ = std::make_unique<Impl>(inst, tree, std::move(cfg));
    const auto incidence = build_incidence(inst);
    for (AgentId a = 0; a < inst.num_agents; ++a) {
        impl_->agents.push_back(
            std::make_unique<PcdAgent>(a, inst, tree, impl_->cfg, incidence[static_cast<std::size_t>(a)]));
        impl_->handles.push_back(impl_->agents.back().get());
    }
    impl_->trace.objective = inst.objective;
}

PcdSolver::~PcdSolver() = default;

const CycleRecord& PcdSolver::step() {
    Impl& s = *impl_;
    CycleRecord rec;
    rec.stats = s.runtime.run_cycle(s.handles);
    rec.cycle = rec.stats.cycle;

    const LocalSwarm& root = s.agents[static_cast<std::size_t>(s.tree->root)]->swarm_;
    rec.g_best_cost = root.g_best_fitness;
    rec.g_best_assignment.reserve(s.agents.size());
    for (const auto& agent : s.agents) rec.g_best_assignment.push_back(agent->swarm_.g_best_x);

    const CycleRecord* prev = s.trace.cycles.empty() ? nullptr : &s.trace.cycles.back();
    rec.hops = (prev ? prev->hops : 0) + rec.stats.hops;
    rec.elapsed_ms = (prev ? prev->elapsed_ms : 0.0) +
                     std::chrono::duration<double, std::milli>(rec.stats.duration).count();

    s.trace.best_assignment = rec.g_best_assignment;
    s.trace.cycles.push_back(std::move(rec));
    return s.trace.cycles.back();
}

const RunTrace& PcdSolver::run() {
    while (cycle() < impl_->cfg.max_cycles) step();
    return impl_->trace;
}

int PcdSolver::cycle() const { return impl_->runtime.cycles_run(); }
const RunTrace& PcdSolver::trace() const { return impl_->trace; }
const SwarmConfig& PcdSolver::config() const { return impl_->cfg; }

const LocalSwarm& PcdSolver::swarm(AgentId agent) const {
    return impl_->agents.at(static_cast<std::size_t>(agent))->swarm_;
}
LocalSwarm& PcdSolver::swarm_mut(AgentId agent) { return impl_->agents.at(static_cast<std::size_t>(agent))->swarm_; }
const GcpsoControl& PcdSolver::control(AgentId agent) const {
    return impl_->agents.at(static_cast<std::size_t>(agent))->ctrl_;
}
const BestPayload& PcdSolver::last_best(AgentId agent) const {
    return impl_->agents.at(static_cast<std::size_t>(agent))->last_best_;
}
std::optional<CrossoverDraw> PcdSolver::last_crossover(AgentId agent) const {
    return impl_->agents.at(static_cast<std::size_t>(agent))->last_crossover_;
}

Assignment PcdSolver::particle_position(int k) const {
    Assignment out;
    for (const auto& agent : impl_->agents) out.push_back(agent->swarm_.x.at(static_cast<std::size_t>(k)));
    return out;
}

Assignment PcdSolver::particle_best_position(int k) const {
    Assignment out;
    for (const auto& agent : impl_->agents) out.push_back(agent->swarm_.p_best_x.at(static_cast<std::size_t>(k)));
    return out;
}

void PcdSolver::set_draw_override(DrawOverride draws) {
    impl_->draws = std::move(draws);
    for (auto& agent : impl_->agents) agent->draws_ = &impl_->draws;
}

void PcdSolver::set_message_log(std::ostream* log) { impl_->runtime.set_message_log(log); }

RunTrace solve(const CdcopInstance& inst, const PseudoTree& tree, const SwarmConfig& cfg) {
    PcdSolver solver(inst, tree, cfg);
    return solver.run();
}

}  // namespace cdcop
