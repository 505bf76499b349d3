#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "cdcop/instance.hpp"

namespace cdcop {

struct CoefficientRange {
    double lo = -5.0;
    double hi = 5.0;
};

struct ErdosRenyiSpec {
    int n = 50;
    double p = 0.2;
};
struct RandomTreeSpec {
    int n = 50;
};
struct BarabasiAlbertSpec {
    int n = 100;
    int m = 3;
};
struct SensorGridSpec {
    int rows = 8;
    int cols = 8;
};

using BenchFamily = std::variant<ErdosRenyiSpec, RandomTreeSpec, BarabasiAlbertSpec, SensorGridSpec>;

struct BenchSpec {
    BenchFamily family = ErdosRenyiSpec{};
    std::optional<Domain> domain;  // family default when unset
    CoefficientRange coefficients;
    std::uint64_t seed = 0;
};

/// Sensor constants. Cells are `kSensorCellSize` wide with offsets in
/// [0, kSensorCellSize], laid out with pitch `kSensorCellPitch` so that
/// sensors in adjacent cells never coincide.
inline constexpr double kSensorSignal = 10000.0;
inline constexpr double kSensorCellSize = 10.0;
inline constexpr double kSensorCellPitch = 11.0;

/// Retries before an Erdos-Renyi draw is declared hopelessly disconnected.
inline constexpr int kConnectivityRetries = 100;

Domain default_domain(const BenchFamily& family);
std::string family_name(const BenchFamily& family);

/// a*x0^2 + b*x0*x1 + c*x1^2.
Expression quadratic_form(double a, double b, double c);

/// C / (d^2 * lambda) with d^2 = (x0 - x1 + dx)^2 + dy^2 and
/// lambda = (r0 - x0)^2 + (r1 - x1)^2 + eta.
Expression sensor_utility(double dx, double dy, double r0, double r1, double eta);

CdcopInstance gen_erdos_renyi(int n, double p, Domain domain, CoefficientRange coeffs, std::uint64_t seed);
CdcopInstance gen_random_tree(int n, Domain domain, CoefficientRange coeffs, std::uint64_t seed);
CdcopInstance gen_barabasi_albert(int n, int m, Domain domain, CoefficientRange coeffs, std::uint64_t seed);
CdcopInstance gen_sensor_grid(int rows, int cols, std::uint64_t seed);

/// Dispatches on the family; throws ConfigError on invalid parameters.
CdcopInstance generate(const BenchSpec& spec);

}  // namespace cdcop
