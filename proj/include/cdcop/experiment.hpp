#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdcop/benchgen.hpp"
#include "cdcop/solver.hpp"
#include "cdcop/swarm.hpp"

namespace cdcop {

enum class Variant { Pcd, PcdCrossover };

std::string_view variant_name(Variant v);
/// Accepts "PCD" and "PCD_CrossOver" (case-insensitive). Throws UnknownVariant.
Variant parse_variant(std::string_view name);

/// Per-agent per-cycle scalar slack allowed on top of K * (|N_i| + 1 + |CH_i|).
inline constexpr std::size_t kMessageSizeSlack = 0;

struct ExperimentConfig {
    std::optional<std::filesystem::path> instance_file;
    std::optional<BenchSpec> bench;  // bench.seed is replaced per instance
    SwarmConfig swarm;
    std::vector<Variant> variants{Variant::Pcd, Variant::PcdCrossover};
    int num_instances = 1;
    int repeats = 1;
    std::filesystem::path output_dir;  // empty: keep results in memory only
    std::uint64_t master_seed = 0;
    AgentId root = 0;
    bool record_wall_clock = true;
};

void validate_experiment(const ExperimentConfig& cfg);

std::uint64_t instance_seed(std::uint64_t master, int instance);
/// hash(master, instance, repeat, variant name): independent of which other
/// variants are requested.
std::uint64_t run_seed(std::uint64_t master, int instance, int repeat, Variant variant);

struct RunSummary {
    int instance = 0;
    int repeat = 0;
    Variant variant = Variant::Pcd;
    std::uint64_t seed = 0;
    double final_cost = 0.0;  // reported sign
    bool anytime_ok = true;
    bool message_counts_ok = true;
    bool message_size_ok = true;
};

struct VariantSummary {
    Variant variant = Variant::Pcd;
    std::vector<double> mean_cost_per_cycle;  // reported sign, over all runs
    std::vector<double> instance_mean_final;  // reported sign, per instance
    double mean_final_cost = 0.0;
};

/// Fraction of instances on which `a`'s mean final cost is at least as good
/// as `b`'s, in the instance's own sense.
struct WinRate {
    Variant a = Variant::Pcd;
    Variant b = Variant::Pcd;
    double rate = 0.0;
};

struct ExperimentSummary {
    std::string setting;
    Objective objective = Objective::Min;
    std::vector<VariantSummary> variants;
    std::vector<WinRate> win_rates;
    std::vector<RunSummary> runs;
    std::size_t trace_files = 0;

    bool invariants_ok() const;
    const VariantSummary* find(Variant v) const;
};

/// Runs every (instance, repeat, variant) and, when an output directory is
/// set, writes one trace CSV per run plus summary.json.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// (base - improved) / |base| measured in the minimization sense.
double improvement_ratio(double base, double improved, Objective objective);

/// One row per summary, one column of mean final cost per requested variant,
/// plus an improvement column per non-baseline variant when `baseline` is set.
/// Throws UnknownVariant if a summary lacks a requested column.
std::string emit_anytime_table(std::span<const ExperimentSummary> summaries, std::span<const Variant> columns,
                               std::optional<Variant> baseline = std::nullopt);

struct TraceRow {
    int cycle = 0;
    double elapsed_ms = 0.0;
    long long hops = 0;
    double g_best_cost = 0.0;  // reported sign
    std::size_t messages_value = 0;
    std::size_t messages_cost = 0;
    std::size_t messages_best = 0;

    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

inline constexpr std::string_view kTraceHeader =
    "cycle,elapsed_ms,hops,g_best_cost,messages_value,messages_cost,messages_best";

/// With `wall_clock` false the elapsed_ms column is written as 0 so the file
/// is a pure function of (instance, config, seed).
void write_trace_csv(std::ostream& out, const RunTrace& trace, bool wall_clock);
std::vector<TraceRow> read_trace_csv(std::istream& in);

std::filesystem::path trace_file_name(int instance, int repeat, Variant variant);

}  // namespace cdcop
