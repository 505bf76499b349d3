#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cdcop/benchgen.hpp"
#include "cdcop/errors.hpp"
#include "cdcop/instance.hpp"
#include "cdcop/oracle.hpp"
#include "cdcop/rng.hpp"
#include "fixtures.hpp"

using namespace cdcop;
using cdcop::testing::example_instance;
using cdcop::testing::example_particles;

namespace {
bool contains(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}
}  // namespace

TEST_CASE("constraint_cost on single functions") {
    const auto inst = example_instance();
    CHECK(constraint_cost(inst, 2, {-1.0, 0.0, 0.0, 2.0}) == doctest::Approx(-6.0).epsilon(1e-12));
    CHECK(constraint_cost(inst, 0, {0.0, 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("constraint_cost negates authored utility on Max instances") {
    CdcopInstance inst;
    inst.num_agents = 2;
    inst.objective = Objective::Max;
    inst.domains.assign(2, Domain{0.0, 10.0});
    // Horizontal pair with d^2 = 1 and lambda = 1 at x = (10, 0).
    inst.functions = {{0, {0, 1}, sensor_utility(-kSensorCellPitch, 0.0, 10.0, 0.0, 1.0)}};
    CHECK(constraint_cost(inst, 0, {10.0, 0.0}) == doctest::Approx(-10000.0).epsilon(1e-12));
    CHECK(inst.reported(constraint_cost(inst, 0, {10.0, 0.0})) == doctest::Approx(10000.0).epsilon(1e-12));
}

TEST_CASE("global_cost matches the worked example") {
    const auto inst = example_instance();
    CHECK(global_cost(inst, example_particles()[0]) == doctest::Approx(14.56).epsilon(1e-12));
    // P4 by hand: f12 = 0.21, f13 = 4.51, f14 = 1.92, f34 = 3.00.
    CHECK(global_cost(inst, example_particles()[3]) == doctest::Approx(0.21 + 4.51 + 1.92 + 3.00).epsilon(1e-12));

    CdcopInstance one = example_instance();
    one.functions.resize(1);
    one.num_agents = 2;
    one.domains.resize(2);
    const Assignment asg{0.3, -0.7};
    CHECK(global_cost(one, asg) == constraint_cost(one, 0, asg));
}

TEST_CASE("incident_functions") {
    const auto inst = example_instance();
    CHECK(incident_functions(inst, 0) == std::vector<std::size_t>{0, 1, 2});
    CHECK(incident_functions(inst, 1) == std::vector<std::size_t>{0});
    CHECK(incident_functions(inst, 2) == std::vector<std::size_t>{1, 3});

    CdcopInstance lone;
    lone.num_agents = 1;
    lone.domains = {Domain{-1.0, 1.0}};
    CHECK(incident_functions(lone, 0).empty());
    CHECK(validate_instance(lone).empty());
}

TEST_CASE("constraint_neighbors and edge_count") {
    const auto inst = example_instance();
    const auto n = constraint_neighbors(inst);
    CHECK(n[0] == std::vector<AgentId>{1, 2, 3});
    CHECK(n[2] == std::vector<AgentId>{0, 3});
    CHECK(edge_count(inst) == 4);
}

TEST_CASE("validate_instance reports each violation") {
    CHECK(validate_instance(example_instance()).empty());

    auto degenerate = example_instance();
    degenerate.domains[1] = Domain{3.0, 3.0};
    CHECK(contains(validate_instance(degenerate), "degenerate domain"));

    auto split = cdcop::testing::graph_instance(4, {{0, 1}, {2, 3}});
    CHECK(contains(validate_instance(split), "disconnected"));

    auto loop = example_instance();
    loop.functions[0].scope = {1, 1};
    CHECK(contains(validate_instance(loop), "self-loop"));

    auto dup = example_instance();
    dup.functions.push_back({99, {3, 2}, Expression::parse("(* x0 x1)")});
    CHECK(contains(validate_instance(dup), "duplicate scope pair"));

    auto dup_id = example_instance();
    dup_id.functions[1].id = dup_id.functions[0].id;
    CHECK(contains(validate_instance(dup_id), "duplicate"));

    auto range = example_instance();
    range.functions[0].scope = {0, 7};
    CHECK(contains(validate_instance(range), "unknown agent"));

    auto unary = example_instance();
    unary.functions[0].expr = Expression::parse("(^ x0 2)");
    CHECK(contains(validate_instance(unary), "does not reference both"));
}

TEST_CASE("property: halved local sums equal the global cost") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst =
            gen_erdos_renyi(12, 0.3, Domain{-50.0, 50.0}, CoefficientRange{}, derive_seed({99, static_cast<std::uint64_t>(trial)}));
        Assignment asg(12);
        for (auto& x : asg) x = rng.uniform(-50.0, 50.0);
        CHECK(nearly_equal(halved_local_sum(inst, asg), global_cost(inst, asg), 1e-9));
    }
}

TEST_CASE("property: Max instances are exact negations") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = gen_sensor_grid(3, 3, seed);
        Rng rng(seed);
        Assignment asg(9);
        for (auto& x : asg) x = rng.uniform(0.0, 10.0);
        double authored = 0.0;
        for (const auto& fn : inst.functions) {
            authored += eval_expr(fn.expr, asg[static_cast<std::size_t>(fn.scope[0])],
                                  asg[static_cast<std::size_t>(fn.scope[1])]);
        }
        CHECK(global_cost(inst, asg) == -authored);
    }
}

TEST_CASE("json round trip") {
    const auto inst = gen_barabasi_albert(20, 2, Domain{-20.0, 20.0}, CoefficientRange{}, 5);
    const auto back = instance_from_json(instance_to_json(inst));
    CHECK(back == inst);
    CHECK(serialize_instance(back) == serialize_instance(inst));

    auto sensor = gen_sensor_grid(2, 3, 1);
    CHECK(instance_from_json(instance_to_json(sensor)) == sensor);

    CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"num_agents": 2})")), ParseError);
    CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(
                        R"({"num_agents": 2, "objective": "max", "domains": [[0,1],[0,1]],
                            "functions": [{"id": 0, "scope": [0,1], "expr": "(+ x0"}]})")),
                    ParseError);
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), IoError);
}
