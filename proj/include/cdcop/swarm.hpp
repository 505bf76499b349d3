#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cdcop/instance.hpp"
#include "cdcop/rng.hpp"
#include "cdcop/runtime.hpp"

namespace cdcop {

struct FixedInertia {
    double w = 0.72;
};

/// Linear schedule from w_max at t = 0 to w_min at t = t_max. `increasing`
/// selects the literal (w_max - w_min) * t / t_max variant instead.
struct AdaptiveInertia {
    double w_max = 1.4;
    double w_min = 0.4;
    bool increasing = false;
};

/// Clerc constriction: w = 2 / |2 - phi - sqrt(phi^2 - 4 phi)|, phi = c1 + c2 > 4.
/// Also switches the non-best velocity rule to the constricted form.
struct ConstrictionInertia {
    double phi = 4.1;
};

using InertiaSchedule = std::variant<FixedInertia, AdaptiveInertia, ConstrictionInertia>;

struct SwarmConfig {
    int particles = 200;
    double c1 = 1.49;
    double c2 = 1.49;
    InertiaSchedule inertia = AdaptiveInertia{};
    int max_successes = 15;
    int max_failures = 5;
    int max_cycles = 500;
    bool crossover = false;
    std::uint64_t seed = 0;
};

/// Throws ConfigError on the first violated invariant.
void validate_config(const SwarmConfig& cfg);

/// Returns the weight for cycle t. Throws ConfigError for phi <= 4.
double inertia_weight(const InertiaSchedule& schedule, int t, int t_max);

std::string describe(const InertiaSchedule& schedule);

/// One agent's slice of the population: its own coordinate of each particle.
struct LocalSwarm {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> local_fitness;
    std::vector<double> fitness;
    std::vector<double> p_best_x;
    std::vector<double> p_best_fitness;  // authoritative at the root only
    std::vector<double> b_p;             // crossover probabilities
    double g_best_x = 0.0;
    double g_best_fitness = std::numeric_limits<double>::infinity();  // root only
    bool has_g_best = false;

    std::size_t size() const { return x.size(); }
};

struct GcpsoControl {
    int t = 0;
    int successes = 0;
    int failures = 0;
    double rho = 1.0;
    std::optional<int> best_particle;  // most recent P*
};

/// Zero velocities, positions uniform on the domain, bests unset (+inf).
LocalSwarm initialize_swarm(const Domain& domain, int particles, Rng& rng);

/// Root step of BEST_UPDATE: strict-< updates of p_best and g_best from
/// `swarm.fitness`. P* is the last particle to lower g_best in index order.
BestPayload root_best_update(LocalSwarm& swarm);

/// Non-root step: snapshot own coordinates for improved particles and adopt
/// the new global best coordinate.
void apply_best(LocalSwarm& swarm, const BestPayload& best);

/// Advances t, applies the rho rule on the counters as they stood before this
/// cycle, then updates the success/failure streaks.
void update_control(GcpsoControl& ctrl, bool improved, const SwarmConfig& cfg);

struct VelocityCoefficients {
    double w = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    bool constricted = false;
};

/// GCPSO velocity/position step for every particle not masked by `frozen`.
/// Positions are clamped to the domain; velocities are kept as computed.
void variable_update(LocalSwarm& swarm, const GcpsoControl& ctrl, const VelocityCoefficients& coeff,
                     const Domain& domain, std::span<const char> frozen = {});

/// b_p[k] = |local_k| / sum_j |local_j|; uniform if the sum is zero.
std::vector<double> crossover_probabilities(std::span<const double> local_fitness);

/// Two distinct particles by weighted sampling without replacement.
std::pair<int, int> select_crossover_pair(std::span<const double> weights, Rng& rng);

/// Arithmetic crossover of particles a and b with blend factor r. Returns
/// true if the velocities were crossed too (|v_a + v_b| != 0).
bool apply_crossover(LocalSwarm& swarm, int a, int b, double r);

}  // namespace cdcop
