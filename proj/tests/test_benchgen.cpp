#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cdcop/benchgen.hpp"
#include "cdcop/errors.hpp"
#include "cdcop/pseudo_tree.hpp"
#include "cdcop/rng.hpp"

using namespace cdcop;

namespace {

const Domain kWide{-50.0, 50.0};

std::vector<std::size_t> degrees(const CdcopInstance& inst) {
    std::vector<std::size_t> out;
    for (const auto& n : constraint_neighbors(inst)) out.push_back(n.size());
    return out;
}

bool acyclic(const CdcopInstance& inst) {
    std::vector<int> parent(static_cast<std::size_t>(inst.num_agents));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    for (const auto& fn : inst.functions) {
        const int a = find(fn.scope[0]), b = find(fn.scope[1]);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
    }
    return true;
}

}  // namespace

TEST_CASE("Erdos-Renyi edge counts") {
    CHECK(edge_count(gen_erdos_renyi(50, 1.0, kWide, {}, 1)) == 1225);

    const int runs = 100;
    double total = 0.0;
    for (int s = 0; s < runs; ++s) total += static_cast<double>(edge_count(gen_erdos_renyi(50, 0.2, kWide, {}, static_cast<std::uint64_t>(s))));
    const double mean = total / runs;
    const double sigma_mean = std::sqrt(1225.0 * 0.2 * 0.8 / runs);
    CHECK(std::abs(mean - 245.0) <= 3.0 * sigma_mean);

    CHECK_THROWS_AS(gen_erdos_renyi(50, 0.001, kWide, {}, 1), GenerationFailed);
    CHECK_THROWS_AS(gen_erdos_renyi(50, 1.5, kWide, {}, 1), ConfigError);
}

TEST_CASE("random trees") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto inst = gen_random_tree(50, kWide, {}, s);
        CHECK(edge_count(inst) == 49);
        CHECK(acyclic(inst));
        std::ostringstream edges;
        write_tree_edges(edges, build_bfs(inst));
        CHECK(edges.str().find("non-tree") == std::string::npos);
    }
    CHECK(edge_count(gen_random_tree(2, kWide, {}, 0)) == 1);
}

TEST_CASE("Barabasi-Albert graphs") {
    CHECK(edge_count(gen_barabasi_albert(100, 3, Domain{-20.0, 20.0}, {}, 0)) == 294);
    const auto k4 = gen_barabasi_albert(4, 3, Domain{-20.0, 20.0}, {}, 0);
    CHECK(edge_count(k4) == 6);
    for (auto d : degrees(k4)) CHECK(d == 3);

    double max_sum = 0.0, median_sum = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto d = degrees(gen_barabasi_albert(100, 3, Domain{-20.0, 20.0}, {}, s));
        std::sort(d.begin(), d.end());
        max_sum += static_cast<double>(d.back());
        median_sum += static_cast<double>(d[d.size() / 2]);
    }
    CHECK(max_sum >= 3.0 * median_sum);
    CHECK_THROWS_AS(gen_barabasi_albert(3, 3, Domain{-20.0, 20.0}, {}, 0), ConfigError);
}

TEST_CASE("sensor grid") {
    const auto inst = gen_sensor_grid(8, 8, 3);
    CHECK(inst.num_agents == 64);
    CHECK(edge_count(inst) == 112);
    CHECK(inst.objective == Objective::Max);
    for (const auto& d : inst.domains) CHECK(d == Domain{0.0, 10.0});
    for (const auto& fn : inst.functions) {
        const auto& nodes = fn.expr.nodes();
        CHECK(std::any_of(nodes.begin(), nodes.end(), [](const auto& n) { return n.op == Expression::Op::Div; }));
        // Every corner of the domain box stays finite and positive.
        for (double a : {0.0, 10.0}) {
            for (double b : {0.0, 10.0}) {
                const double u = eval_expr(fn.expr, a, b);
                CHECK(std::isfinite(u));
                CHECK(u > 0.0);
            }
        }
    }
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("property: generated instances are valid, deterministic and finite") {
    const std::vector<BenchFamily> families = {ErdosRenyiSpec{30, 0.2}, RandomTreeSpec{30}, BarabasiAlbertSpec{40, 3},
                                               SensorGridSpec{4, 5}};
    for (const auto& family : families) {
        for (std::uint64_t s = 0; s < 10; ++s) {
            BenchSpec spec;
            spec.family = family;
            spec.seed = s;
            const auto inst = generate(spec);
            CHECK(validate_instance(inst).empty());
            CHECK(serialize_instance(generate(spec)) == serialize_instance(inst));
            const Domain dom = default_domain(family);
            Rng rng(s);
            for (int sample = 0; sample < 100; ++sample) {
                Assignment asg(static_cast<std::size_t>(inst.num_agents));
                for (auto& x : asg) x = rng.uniform(dom.lb, dom.ub);
                CHECK(std::isfinite(global_cost(inst, asg)));
            }
        }
    }
}

TEST_CASE("coefficient ranges and domains are honoured") {
    BenchSpec spec;
    spec.family = ErdosRenyiSpec{10, 0.5};
    spec.domain = Domain{-1.0, 2.0};
    spec.coefficients = {1.0, 2.0};
    const auto inst = generate(spec);
    for (const auto& d : inst.domains) CHECK(d == Domain{-1.0, 2.0});
    for (const auto& fn : inst.functions) {
        for (const auto& n : fn.expr.nodes()) {
            if (n.op == Expression::Op::Constant) {
                CHECK(n.value >= 1.0);
                CHECK(n.value <= 2.0);
            }
        }
    }
    CHECK(family_name(BarabasiAlbertSpec{}) == "barabasi-albert(n=100,m=3)");
}
