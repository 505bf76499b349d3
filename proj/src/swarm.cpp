#include "cdcop/swarm.hpp"

#include <cmath>
#include <limits>

#include "cdcop/errors.hpp"

namespace cdcop {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

void validate_config(const SwarmConfig& cfg) {
    if (cfg.particles < 2) throw ConfigError("particle count K must be at least 2");
    if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0)) throw ConfigError("c1 and c2 must be positive");
    if (cfg.max_successes < 1 || cfg.max_failures < 1) throw ConfigError("max_sc and max_fc must be at least 1");
    if (cfg.max_cycles < 1) throw ConfigError("t_max must be at least 1");
    std::visit(overloaded{
                   [](const FixedInertia& f) {
                       if (!std::isfinite(f.w)) throw ConfigError("inertia weight must be finite");
                   },
                   [](const AdaptiveInertia& a) {
                       if (!std::isfinite(a.w_max) || !std::isfinite(a.w_min)) {
                           throw ConfigError("adaptive inertia bounds must be finite");
                       }
                   },
                   [&cfg](const ConstrictionInertia& c) {
                       if (!(c.phi > 4.0)) throw ConfigError("constriction requires phi = c1 + c2 > 4");
                       if (std::abs(c.phi - (cfg.c1 + cfg.c2)) > 1e-9) {
                           throw ConfigError("constriction phi must equal c1 + c2");
                       }
                   },
               },
               cfg.inertia);
}

double inertia_weight(const InertiaSchedule& schedule, int t, int t_max) {
    return std::visit(
        overloaded{
            [](const FixedInertia& f) { return f.w; },
            [t, t_max](const AdaptiveInertia& a) {
                const double frac = t_max > 0 ? static_cast<double>(t) / t_max : 0.0;
                return a.increasing ? (a.w_max - a.w_min) * frac : a.w_max - (a.w_max - a.w_min) * frac;
            },
            [](const ConstrictionInertia& c) {
                if (!(c.phi > 4.0)) throw ConfigError("constriction requires phi > 4");
                return 2.0 / std::abs(2.0 - c.phi - std::sqrt(c.phi * c.phi - 4.0 * c.phi));
            },
        },
        schedule);
}

std::string describe(const InertiaSchedule& schedule) {
    return std::visit(overloaded{
                          [](const FixedInertia& f) { return "fixed(w=" + format_number(f.w) + ")"; },
                          [](const AdaptiveInertia& a) {
                              return std::string(a.increasing ? "adaptive-literal" : "adaptive") +
                                     "(w_max=" + format_number(a.w_max) + ", w_min=" + format_number(a.w_min) + ")";
                          },
                          [](const ConstrictionInertia& c) { return "constriction(phi=" + format_number(c.phi) + ")"; },
                      },
                      schedule);
}

LocalSwarm initialize_swarm(const Domain& domain, int particles, Rng& rng) {
    const auto k = static_cast<std::size_t>(particles);
    LocalSwarm s;
    s.x.resize(k);
    for (auto& xi : s.x) xi = rng.uniform(domain.lb, domain.ub);
    s.v.assign(k, 0.0);
    s.local_fitness.assign(k, 0.0);
    s.fitness.assign(k, 0.0);
    s.p_best_x = s.x;
    s.p_best_fitness.assign(k, kInf);
    s.b_p.assign(k, 0.0);
    return s;
}

BestPayload root_best_update(LocalSwarm& swarm) {
    BestPayload out;
    for (std::size_t k = 0; k < swarm.size(); ++k) {
        const double f = swarm.fitness[k];
        if (f < swarm.p_best_fitness[k]) {
            swarm.p_best_x[k] = swarm.x[k];
            swarm.p_best_fitness[k] = f;
            out.improved.push_back(static_cast<int>(k));
        }
        if (f < swarm.g_best_fitness) {
            swarm.g_best_x = swarm.x[k];
            swarm.g_best_fitness = f;
            swarm.has_g_best = true;
            out.global_best = static_cast<int>(k);
        }
    }
    return out;
}

void apply_best(LocalSwarm& swarm, const BestPayload& best) {
    for (int k : best.improved) swarm.p_best_x[static_cast<std::size_t>(k)] = swarm.x[static_cast<std::size_t>(k)];
    if (best.global_best) {
        swarm.g_best_x = swarm.x[static_cast<std::size_t>(*best.global_best)];
        swarm.has_g_best = true;
    }
}

void update_control(GcpsoControl& ctrl, bool improved, const SwarmConfig& cfg) {
    ++ctrl.t;
    if (ctrl.successes > cfg.max_successes) {
        ctrl.rho *= 2.0;
    } else if (ctrl.failures > cfg.max_failures) {
        const double halved = ctrl.rho * 0.5;
        if (halved > 0.0) ctrl.rho = halved;
    }
    if (improved) {
        ++ctrl.successes;
        ctrl.failures = 0;
    } else {
        ctrl.successes = 0;
        ++ctrl.failures;
    }
}

void variable_update(LocalSwarm& swarm, const GcpsoControl& ctrl, const VelocityCoefficients& c, const Domain& domain,
                     std::span<const char> frozen) {
    for (std::size_t k = 0; k < swarm.size(); ++k) {
        if (!frozen.empty() && frozen[k]) continue;
        const double x = swarm.x[k];
        const double g = swarm.has_g_best ? swarm.g_best_x : x;
        double& v = swarm.v[k];
        if (ctrl.best_particle && static_cast<std::size_t>(*ctrl.best_particle) == k) {
            v = -x + g + c.w * v + ctrl.rho * (1.0 - 2.0 * c.r2);
        } else {
            const double pull = c.r1 * c.c1 * (swarm.p_best_x[k] - x) + c.r2 * c.c2 * (g - x);
            v = c.constricted ? c.w * (v + pull) : c.w * v + pull;
        }
        swarm.x[k] = domain.clamp(x + v);
    }
}

std::vector<double> crossover_probabilities(std::span<const double> local_fitness) {
    double total = 0.0;
    for (double f : local_fitness) total += std::abs(f);
    std::vector<double> out(local_fitness.size());
    if (!(total > 0.0) || !std::isfinite(total)) {
        // DegenerateWeights: fall back to uniform selection.
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
        return out;
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(local_fitness[k]) / total;
    return out;
}

namespace {

int weighted_pick(std::span<const double> weights, int excluded, Rng& rng) {
    const auto n = static_cast<int>(weights.size());
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        if (k != excluded) total += weights[static_cast<std::size_t>(k)];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        const int span = excluded >= 0 ? n - 1 : n;
        int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
        if (excluded >= 0 && pick >= excluded) ++pick;
        return pick;
    }
    const double target = rng.uniform01() * total;
    double acc = 0.0;
    int last = -1;
    for (int k = 0; k < n; ++k) {
        const double w = weights[static_cast<std::size_t>(k)];
        if (k == excluded || !(w > 0.0)) continue;
        acc += w;
        last = k;
        if (target < acc) return k;
    }
    return last;
}

}  // namespace

std::pair<int, int> select_crossover_pair(std::span<const double> weights, Rng& rng) {
    if (weights.size() < 2) throw ConfigError("crossover needs at least two particles");
    const int a = weighted_pick(weights, -1, rng);
    const int b = weighted_pick(weights, a, rng);
    return {a, b};
}

bool apply_crossover(LocalSwarm& swarm, int a, int b, double r) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    const double xa = swarm.x[ia];
    const double xb = swarm.x[ib];
    swarm.x[ia] = r * xa + (1.0 - r) * xb;
    swarm.x[ib] = r * xb + (1.0 - r) * xa;

    const double va = swarm.v[ia];
    const double vb = swarm.v[ib];
    const double sum = va + vb;
    if (std::abs(sum) == 0.0) return false;
    const double direction = sum / std::abs(sum);
    swarm.v[ia] = direction * std::abs(va);
    swarm.v[ib] = direction * std::abs(vb);
    return true;
}

}  // namespace cdcop
