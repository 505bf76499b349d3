#include <doctest.h>

#include "cdcop/errors.hpp"
#include "cdcop/oracle.hpp"
#include "cdcop/pseudo_tree.hpp"
#include "cdcop/solver.hpp"
#include "fixtures.hpp"

using namespace cdcop;
using namespace cdcop::testing;

TEST_CASE("centralized fitness of the worked particles") {
    const auto inst = example_instance();
    // Halved sums of the per-agent local fitness values of each particle.
    const std::vector<double> expected{(-1.44 - 0.44 + 21.0 + 10.0) / 2, (14.0 + 0.0 + 12.0 + 10.0) / 2,
                                       (-9.0 - 1.0 + 16.0 + 8.0) / 2, (6.64 + 0.21 + 7.51 + 4.92) / 2};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(centralized_fitness(inst, example_particles()[k]) == doctest::Approx(expected[k]).epsilon(1e-12));
    }
    CHECK(centralized_fitness(inst, {0.0, 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("grid search") {
    const auto sphere = sphere_instance();
    const auto opt = grid_optimum(sphere, {101, 6});
    CHECK(opt.cost == 0.0);
    CHECK(opt.assignment == Assignment{0.0, 0.0});

    CdcopInstance cross;
    cross.num_agents = 2;
    cross.domains.assign(2, Domain{-10.0, 10.0});
    cross.functions = {{0, {0, 1}, Expression::parse("(+ (^ x0 2) (* 2 (* x0 x1)))")}};
    const auto c = grid_optimum(cross, {201, 6});
    // Corner oracle: the minimum of x^2 + 2xy on the box is -100 at (+-10, -+10).
    double corner = 1e300;
    for (double a : {-10.0, 10.0}) {
        for (double b : {-10.0, 10.0}) corner = std::min(corner, a * a + 2 * a * b);
    }
    CHECK(c.cost <= -99.0);
    CHECK(c.cost == corner);

    CHECK_THROWS_AS(grid_optimum(cross, {1, 6}), ConfigError);
    CHECK_THROWS_AS(grid_optimum(path_instance(7), {3, 6}), TooLarge);
    CHECK_THROWS_AS(grid_optimum(example_instance(), {100000, 6}), TooLarge);
}

TEST_CASE("worked example optimum and solver quality") {
    const auto inst = example_instance();
    const auto grid = grid_optimum(inst, {21, 6});
    CHECK(grid.cost == doctest::Approx(-100.0));
    CHECK(grid.assignment[0] == 0.0);
    CHECK(std::abs(grid.assignment[1]) == 10.0);

    SwarmConfig cfg;
    cfg.particles = 50;
    cfg.max_cycles = 2000;
    cfg.seed = 1;
    const auto trace = solve(inst, build_bfs(inst), cfg);
    CHECK(trace.best_cost() <= grid.cost + 1.0);
}

TEST_CASE("check_anytime") {
    CHECK(check_anytime(std::vector<double>{5.0, 4.0, 4.5}) == std::size_t{2});
    CHECK_FALSE(check_anytime(std::vector<double>{5.0, 5.0, 5.0}).has_value());
    CHECK_FALSE(check_anytime(std::vector<double>{}).has_value());
    CHECK_FALSE(check_anytime(std::vector<double>{3.0, 2.0, 1.0}).has_value());
}

TEST_CASE("nearly_equal") {
    CHECK(nearly_equal(1e9, 1e9 + 0.5, 1e-9));
    CHECK_FALSE(nearly_equal(1.0, 1.1, 1e-9));
    CHECK(nearly_equal(0.0, 1e-12, 1e-9));
}
