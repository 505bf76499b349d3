#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cdcop/instance.hpp"

namespace cdcop::testing {

/// Four-agent example: f12 = x1^2 - x2^2, f13 = x1^2 + 2 x1 x3,
/// f14 = 2 x1^2 - 2 x4^2, f34 = x3^2 + 3 x4^2, all domains [-10, 10].
/// Agent ids are zero-based (x1 -> 0).
inline CdcopInstance example_instance() {
    CdcopInstance inst;
    inst.num_agents = 4;
    inst.domains.assign(4, Domain{-10.0, 10.0});
    inst.functions = {
        {12, {0, 1}, Expression::parse("(- (^ x0 2) (^ x1 2))")},
        {13, {0, 2}, Expression::parse("(+ (^ x0 2) (* 2 (* x0 x1)))")},
        {14, {0, 3}, Expression::parse("(- (* 2 (^ x0 2)) (* 2 (^ x1 2)))")},
        {34, {2, 3}, Expression::parse("(+ (^ x0 2) (* 3 (^ x1 2)))")},
    };
    return inst;
}

/// Particle positions of the worked four-particle example, per particle.
inline const std::vector<Assignment>& example_particles() {
    static const std::vector<Assignment> p = {
        {-1.0, 1.2, -2.0, 2.0},
        {-2.0, 2.0, -1.0, 1.0},
        {0.0, 1.0, 2.0, -2.0},
        {1.1, -1.0, 1.5, 0.5},
    };
    return p;
}

/// Instance whose constraint graph has the given edges; every function is x0*x1.
inline CdcopInstance graph_instance(int n, const std::vector<std::pair<int, int>>& edges, Domain domain = {-1.0, 1.0}) {
    CdcopInstance inst;
    inst.num_agents = n;
    inst.domains.assign(static_cast<std::size_t>(n), domain);
    int id = 0;
    for (const auto& [a, b] : edges) inst.functions.push_back({id++, {a, b}, Expression::parse("(* x0 x1)")});
    return inst;
}

inline CdcopInstance path_instance(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return graph_instance(n, edges);
}

inline CdcopInstance star_instance(int leaves) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return graph_instance(leaves + 1, edges);
}

/// f(x, y) = x^2 + y^2 on [-50, 50]^2.
inline CdcopInstance sphere_instance() {
    CdcopInstance inst;
    inst.num_agents = 2;
    inst.domains.assign(2, Domain{-50.0, 50.0});
    inst.functions = {{0, {0, 1}, Expression::parse("(+ (^ x0 2) (^ x1 2))")}};
    return inst;
}

}  // namespace cdcop::testing
