#include "cdcop/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cdcop/errors.hpp"
#include "cdcop/rng.hpp"

namespace cdcop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_common(int n, const Domain& domain, const CoefficientRange& coeffs) {
    if (n < 2) throw ConfigError("benchmark needs at least 2 agents");
    if (!(domain.lb < domain.ub)) throw ConfigError("benchmark domain must satisfy lb < ub");
    if (!(coeffs.lo <= coeffs.hi)) throw ConfigError("coefficient range must satisfy lo <= hi");
}

CdcopInstance quadratic_instance(int n, const std::vector<std::pair<int, int>>& edges, const Domain& domain,
                                 const CoefficientRange& coeffs, Rng& rng) {
    CdcopInstance inst;
    inst.num_agents = n;
    inst.domains.assign(static_cast<std::size_t>(n), domain);
    inst.objective = Objective::Min;
    int id = 0;
    for (const auto& [i, j] : edges) {
        const double a = rng.uniform(coeffs.lo, coeffs.hi);
        const double b = rng.uniform(coeffs.lo, coeffs.hi);
        const double c = rng.uniform(coeffs.lo, coeffs.hi);
        inst.functions.push_back(CostFunction{id++, {std::min(i, j), std::max(i, j)}, quadratic_form(a, b, c)});
    }
    return inst;
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    int components = n;
    for (const auto& [a, b] : edges) {
        const int ra = find(a);
        const int rb = find(b);
        if (ra != rb) {
            parent[static_cast<std::size_t>(ra)] = rb;
            --components;
        }
    }
    return components == 1;
}

}  // namespace

Expression quadratic_form(double a, double b, double c) {
    const Expression x0 = Expression::var(0);
    const Expression x1 = Expression::var(1);
    return Expression::constant(a) * pow(x0, 2) + Expression::constant(b) * (x0 * x1) +
           Expression::constant(c) * pow(x1, 2);
}

Expression sensor_utility(double dx, double dy, double r0, double r1, double eta) {
    const Expression x0 = Expression::var(0);
    const Expression x1 = Expression::var(1);
    auto constant = [](double v) { return Expression::constant(v); };
    const Expression dist2 = pow(x0 - x1 + constant(dx), 2) + constant(dy * dy);
    const Expression interference = pow(constant(r0) - x0, 2) + pow(constant(r1) - x1, 2) + constant(eta);
    return constant(kSensorSignal) / (dist2 * interference);
}

Domain default_domain(const BenchFamily& family) {
    return std::visit(overloaded{
                          [](const ErdosRenyiSpec&) { return Domain{-50.0, 50.0}; },
                          [](const RandomTreeSpec&) { return Domain{-50.0, 50.0}; },
                          [](const BarabasiAlbertSpec&) { return Domain{-20.0, 20.0}; },
                          [](const SensorGridSpec&) { return Domain{0.0, kSensorCellSize}; },
                      },
                      family);
}

std::string family_name(const BenchFamily& family) {
    return std::visit(overloaded{
                          [](const ErdosRenyiSpec& s) {
                              return "erdos-renyi(n=" + std::to_string(s.n) + ",p=" + format_number(s.p) + ")";
                          },
                          [](const RandomTreeSpec& s) { return "random-tree(n=" + std::to_string(s.n) + ")"; },
                          [](const BarabasiAlbertSpec& s) {
                              return "barabasi-albert(n=" + std::to_string(s.n) + ",m=" + std::to_string(s.m) + ")";
                          },
                          [](const SensorGridSpec& s) {
                              return "sensor-grid(" + std::to_string(s.rows) + "x" + std::to_string(s.cols) + ")";
                          },
                      },
                      family);
}

CdcopInstance gen_erdos_renyi(int n, double p, Domain domain, CoefficientRange coeffs, std::uint64_t seed) {
    check_common(n, domain, coeffs);
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("edge probability must be in (0, 1]");
    for (int attempt = 0; attempt < kConnectivityRetries; ++attempt) {
        Rng rng(derive_seed({seed, label_hash("erdos-renyi"), static_cast<std::uint64_t>(attempt)}));
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.bernoulli(p)) edges.emplace_back(i, j);
            }
        }
        if (!connected(n, edges)) continue;
        return quadratic_instance(n, edges, domain, coeffs, rng);
    }
    throw GenerationFailed("Erdos-Renyi graph with n=" + std::to_string(n) + ", p=" + format_number(p) +
                           " stayed disconnected after " + std::to_string(kConnectivityRetries) + " draws");
}

CdcopInstance gen_random_tree(int n, Domain domain, CoefficientRange coeffs, std::uint64_t seed) {
    check_common(n, domain, coeffs);
    Rng rng(derive_seed({seed, label_hash("random-tree")}));
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(i))), i);
    return quadratic_instance(n, edges, domain, coeffs, rng);
}

CdcopInstance gen_barabasi_albert(int n, int m, Domain domain, CoefficientRange coeffs, std::uint64_t seed) {
    check_common(n, domain, coeffs);
    if (m < 1) throw ConfigError("Barabasi-Albert m must be at least 1");
    if (n <= m) throw ConfigError("Barabasi-Albert needs n > m");
    Rng rng(derive_seed({seed, label_hash("barabasi-albert")}));
    std::vector<std::pair<int, int>> edges;
    std::vector<int> endpoints;  // each node appears once per incident edge
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    for (int v = m; v < n; ++v) {
        std::set<int> targets;
        while (static_cast<int>(targets.size()) < m) {
            // With no edges yet (m == 1 seed) attachment is uniform.
            const int pick = endpoints.empty()
                                 ? static_cast<int>(rng.below(static_cast<std::uint64_t>(v)))
                                 : endpoints[static_cast<std::size_t>(rng.below(endpoints.size()))];
            targets.insert(pick);
        }
        for (int t : targets) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return quadratic_instance(n, edges, domain, coeffs, rng);
}

CdcopInstance gen_sensor_grid(int rows, int cols, std::uint64_t seed) {
    if (rows < 2 || cols < 2) throw ConfigError("sensor grid needs rows, cols >= 2");
    Rng rng(derive_seed({seed, label_hash("sensor-grid")}));
    CdcopInstance inst;
    inst.num_agents = rows * cols;
    inst.domains.assign(static_cast<std::size_t>(inst.num_agents), Domain{0.0, kSensorCellSize});
    inst.objective = Objective::Max;

    int id = 0;
    auto add_pair = [&](int i, int j) {
        const int gx_i = i % cols, gy_i = i / cols;
        const int gx_j = j % cols, gy_j = j / cols;
        const double dx = kSensorCellPitch * (gx_i - gx_j);
        const double dy = kSensorCellPitch * (gy_i - gy_j);
        const double r_i = rng.uniform(0.0, kSensorCellSize);
        const double r_j = rng.uniform(0.0, kSensorCellSize);
        const double eta = rng.uniform(1.0, 10.0);
        inst.functions.push_back(CostFunction{id++, {i, j}, sensor_utility(dx, dy, r_i, r_j, eta)});
    };
    for (int gy = 0; gy < rows; ++gy) {
        for (int gx = 0; gx < cols; ++gx) {
            const int i = gy * cols + gx;
            if (gx + 1 < cols) add_pair(i, i + 1);
            if (gy + 1 < rows) add_pair(i, i + cols);
        }
    }
    return inst;
}

CdcopInstance generate(const BenchSpec& spec) {
    const Domain domain = spec.domain.value_or(default_domain(spec.family));
    return std::visit(overloaded{
                          [&](const ErdosRenyiSpec& s) { return gen_erdos_renyi(s.n, s.p, domain, spec.coefficients, spec.seed); },
                          [&](const RandomTreeSpec& s) { return gen_random_tree(s.n, domain, spec.coefficients, spec.seed); },
                          [&](const BarabasiAlbertSpec& s) {
                              return gen_barabasi_albert(s.n, s.m, domain, spec.coefficients, spec.seed);
                          },
                          [&](const SensorGridSpec& s) { return gen_sensor_grid(s.rows, s.cols, spec.seed); },
                      },
                      spec.family);
}

}  // namespace cdcop
