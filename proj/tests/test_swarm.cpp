#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cdcop/errors.hpp"
#include "cdcop/rng.hpp"
#include "cdcop/swarm.hpp"

using namespace cdcop;

namespace {

LocalSwarm swarm_with(std::vector<double> x) {
    LocalSwarm s;
    s.v.assign(x.size(), 0.0);
    s.local_fitness.assign(x.size(), 0.0);
    s.fitness.assign(x.size(), 0.0);
    s.p_best_x = x;
    s.p_best_fitness.assign(x.size(), std::numeric_limits<double>::infinity());
    s.b_p.assign(x.size(), 0.0);
    s.x = std::move(x);
    return s;
}

}  // namespace

TEST_CASE("initialization") {
    Rng a(11), b(11);
    const Domain d{-3.0, 5.0};
    const auto s = initialize_swarm(d, 64, a);
    CHECK(s.size() == 64);
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(d.contains(s.x[k]));
        CHECK(s.v[k] == 0.0);
        CHECK(s.p_best_x[k] == s.x[k]);
        CHECK(std::isinf(s.p_best_fitness[k]));
    }
    CHECK(initialize_swarm(d, 64, b).x == s.x);
}

TEST_CASE("root_best_update uses strict improvement") {
    auto s = swarm_with({1.0, 2.0, 3.0, 4.0});
    s.fitness = {14.56, 18.0, 7.0, 9.60};
    const auto first = root_best_update(s);
    CHECK(first.improved == std::vector<int>{0, 1, 2, 3});
    CHECK(first.global_best == 2);
    CHECK(s.g_best_x == 3.0);
    CHECK(s.g_best_fitness == 7.0);

    const auto same = root_best_update(s);  // ties do not count
    CHECK(same.improved.empty());
    CHECK_FALSE(same.global_best.has_value());

    s.fitness = {1.0, 20.0, 7.0, 7.0};
    const auto third = root_best_update(s);
    CHECK(third.improved == std::vector<int>{0, 3});
    CHECK(third.global_best == 0);

    auto follower = swarm_with({-1.0, -2.0, 0.0, 1.1});
    follower.x = {5.0, 6.0, 7.0, 8.0};
    apply_best(follower, first);
    CHECK(follower.p_best_x == std::vector<double>{5.0, 6.0, 7.0, 8.0});
    CHECK(follower.g_best_x == 7.0);
}

TEST_CASE("rho follows the previous-cycle streak counters") {
    SwarmConfig cfg;
    GcpsoControl ctrl;
    update_control(ctrl, true, cfg);
    CHECK(ctrl.t == 1);
    CHECK(ctrl.successes == 1);
    CHECK(ctrl.failures == 0);
    CHECK(ctrl.rho == 1.0);

    GcpsoControl up;
    for (int i = 0; i < 16; ++i) update_control(up, true, cfg);
    CHECK(up.successes == 16);
    CHECK(up.rho == 1.0);
    update_control(up, false, cfg);
    CHECK(up.rho == 2.0);
    CHECK(up.successes == 0);

    GcpsoControl down;
    for (int i = 0; i < 6; ++i) update_control(down, false, cfg);
    CHECK(down.rho == 1.0);
    update_control(down, false, cfg);
    CHECK(down.rho == 0.5);
    for (int i = 0; i < 5000; ++i) update_control(down, false, cfg);
    CHECK(down.rho > 0.0);
}

TEST_CASE("inertia schedules") {
    const AdaptiveInertia adaptive;
    CHECK(inertia_weight(adaptive, 0, 500) == doctest::Approx(1.4));
    CHECK(inertia_weight(adaptive, 500, 500) == doctest::Approx(0.4));
    CHECK(inertia_weight(adaptive, 250, 500) == doctest::Approx(0.9));
    const AdaptiveInertia literal{1.4, 0.4, true};
    CHECK(inertia_weight(literal, 0, 500) == 0.0);
    CHECK(inertia_weight(literal, 500, 500) == doctest::Approx(1.0));
    CHECK(std::abs(inertia_weight(ConstrictionInertia{4.1}, 1, 500) - 0.7298) <= 1e-4);
    CHECK_THROWS_AS(inertia_weight(ConstrictionInertia{4.0}, 1, 500), ConfigError);
    CHECK(inertia_weight(FixedInertia{0.72}, 9, 10) == 0.72);
}

TEST_CASE("validate_config") {
    SwarmConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));
    cfg.particles = 1;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = SwarmConfig{};
    cfg.c1 = 0.0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = SwarmConfig{};
    cfg.inertia = ConstrictionInertia{4.1};
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);  // c1 + c2 = 2.98
    cfg.c1 = cfg.c2 = 2.05;
    CHECK_NOTHROW(validate_config(cfg));
    cfg.max_cycles = 0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("variable_update on the worked root slice") {
    auto s = swarm_with({-1.0, -2.0, 0.0, 1.1});
    s.g_best_x = 0.0;
    s.has_g_best = true;
    GcpsoControl ctrl;
    ctrl.best_particle = 2;
    const VelocityCoefficients c{0.72, 1.49, 1.49, 0.7, 0.4, false};
    variable_update(s, ctrl, c, Domain{-10.0, 10.0});
    const std::vector<double> v{0.596, 1.192, 0.2, -0.6556};
    const std::vector<double> x{-0.404, -0.808, 0.2, 0.4444};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(s.v[k] == doctest::Approx(v[k]).epsilon(1e-12));
        CHECK(s.x[k] == doctest::Approx(x[k]).epsilon(1e-12));
    }
}

TEST_CASE("variable_update fixed point, constriction, clamping and freezing") {
    auto still = swarm_with({2.0, 2.0});
    still.g_best_x = 2.0;
    still.has_g_best = true;
    GcpsoControl ctrl;
    ctrl.best_particle = 1;
    variable_update(still, ctrl, {0.72, 1.49, 1.49, 0.3, 0.5, false}, Domain{-10.0, 10.0});
    CHECK(still.x == std::vector<double>{2.0, 2.0});
    CHECK(still.v == std::vector<double>{0.0, 0.0});

    auto con = swarm_with({0.0});
    con.p_best_x = {1.0};
    con.g_best_x = 2.0;
    con.has_g_best = true;
    con.v = {1.0};
    variable_update(con, GcpsoControl{}, {0.7298, 2.05, 2.05, 0.5, 0.5, true}, Domain{-100.0, 100.0});
    const double pull = 0.5 * 2.05 * 1.0 + 0.5 * 2.05 * 2.0;
    CHECK(con.v[0] == doctest::Approx(0.7298 * (1.0 + pull)));

    auto edge = swarm_with({9.0, 0.0});
    edge.v = {5.0, 1.0};
    edge.g_best_x = 0.0;
    edge.has_g_best = true;
    edge.p_best_x = {9.0, 0.0};
    const std::vector<char> frozen{0, 1};
    variable_update(edge, GcpsoControl{}, {1.0, 1.49, 1.49, 0.0, 0.0, false}, Domain{-10.0, 10.0}, frozen);
    CHECK(edge.x[0] == 10.0);
    CHECK(edge.v[0] == 5.0);
    CHECK(edge.x[1] == 0.0);
    CHECK(edge.v[1] == 1.0);
}

TEST_CASE("crossover probabilities") {
    const std::vector<double> local{-1.44, 14.0, -9.0, 6.64};
    const auto b = crossover_probabilities(local);
    const std::vector<double> expected{0.046, 0.450, 0.290, 0.214};
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(b[k] - expected[k]) < 5e-4);
    const auto uniform = crossover_probabilities(std::vector<double>{0.0, 0.0, 0.0, 0.0});
    for (double p : uniform) CHECK(p == 0.25);
}

TEST_CASE("apply_crossover") {
    auto s = swarm_with({-1.0, -2.0, 0.0, 1.1});
    CHECK_FALSE(apply_crossover(s, 1, 3, 0.3));
    CHECK(s.x[1] == doctest::Approx(0.17).epsilon(1e-12));
    CHECK(s.x[3] == doctest::Approx(-1.07).epsilon(1e-12));
    CHECK(s.v[1] == 0.0);
    CHECK(s.v[3] == 0.0);

    auto t = swarm_with({0.0, 1.0});
    t.v = {2.0, -1.0};
    CHECK(apply_crossover(t, 0, 1, 0.5));
    CHECK(t.v[0] == 2.0);
    CHECK(t.v[1] == 1.0);
}

TEST_CASE("property: crossover children stay in the parents' hull") {
    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const double xa = rng.uniform(-50.0, 50.0);
        const double xb = rng.uniform(-50.0, 50.0);
        auto s = swarm_with({xa, xb});
        s.v = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        const double va = s.v[0], vb = s.v[1];
        apply_crossover(s, 0, 1, rng.uniform01());
        const double lo = std::min(xa, xb), hi = std::max(xa, xb);
        CHECK(s.x[0] >= lo - 1e-12);
        CHECK(s.x[0] <= hi + 1e-12);
        CHECK(s.x[1] >= lo - 1e-12);
        CHECK(s.x[1] <= hi + 1e-12);
        CHECK(std::abs(s.v[0]) == std::abs(va));
        CHECK(std::abs(s.v[1]) == std::abs(vb));
    }
}

TEST_CASE("select_crossover_pair") {
    Rng rng(5);
    const std::vector<double> w{0.7, 0.1, 0.1, 0.1};
    int first_is_zero = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto [a, b] = select_crossover_pair(w, rng);
        CHECK(a != b);
        if (a == 0) ++first_is_zero;
    }
    CHECK(first_is_zero > 1200);
    CHECK(first_is_zero < 1600);

    const std::vector<double> single{0.0, 1.0, 0.0};
    for (int i = 0; i < 100; ++i) {
        const auto [a, b] = select_crossover_pair(single, rng);
        CHECK(a == 1);
        CHECK(b != 1);
    }
    CHECK_THROWS_AS(select_crossover_pair(std::vector<double>{1.0}, rng), ConfigError);
}
