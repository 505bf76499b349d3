#include "cdcop/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cdcop/errors.hpp"
#include "cdcop/oracle.hpp"
#include "cdcop/pseudo_tree.hpp"
#include "cdcop/rng.hpp"

namespace cdcop {

std::string_view variant_name(Variant v) { return v == Variant::Pcd ? "PCD" : "PCD_CrossOver"; }

Variant parse_variant(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "pcd") return Variant::Pcd;
    if (lower == "pcd_crossover") return Variant::PcdCrossover;
    throw UnknownVariant("unknown variant \"" + std::string(name) + "\"");
}

void validate_experiment(const ExperimentConfig& cfg) {
    if (cfg.instance_file.has_value() == cfg.bench.has_value()) {
        throw ConfigError("experiment needs exactly one instance source: a file or a benchmark spec");
    }
    if (cfg.instance_file && cfg.num_instances != 1) throw ConfigError("a file source provides exactly one instance");
    if (cfg.num_instances < 1) throw ConfigError("num_instances must be at least 1");
    if (cfg.repeats < 1) throw ConfigError("repeats must be at least 1");
    if (cfg.variants.empty()) throw ConfigError("variant list must not be empty");
    validate_config(cfg.swarm);
}

std::uint64_t instance_seed(std::uint64_t master, int instance) {
    return derive_seed({master, label_hash("instance"), static_cast<std::uint64_t>(instance)});
}

std::uint64_t run_seed(std::uint64_t master, int instance, int repeat, Variant variant) {
    return derive_seed({master, static_cast<std::uint64_t>(instance), static_cast<std::uint64_t>(repeat),
                        label_hash(std::string(variant_name(variant)).c_str())});
}

bool ExperimentSummary::invariants_ok() const {
    return std::all_of(runs.begin(), runs.end(), [](const RunSummary& r) {
        return r.anytime_ok && r.message_counts_ok && r.message_size_ok;
    });
}

const VariantSummary* ExperimentSummary::find(Variant v) const {
    for (const auto& s : variants) {
        if (s.variant == v) return &s;
    }
    return nullptr;
}

std::filesystem::path trace_file_name(int instance, int repeat, Variant variant) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "trace_i%03d_r%03d_%s.csv", instance, repeat, std::string(variant_name(variant)).c_str());
    return buf;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, bool wall_clock) {
    out << kTraceHeader << '\n';
    char elapsed[32];
    for (const auto& c : trace.cycles) {
        std::snprintf(elapsed, sizeof elapsed, "%.3f", wall_clock ? c.elapsed_ms : 0.0);
        out << c.cycle << ',' << elapsed << ',' << c.hops << ',' << format_number(trace.sign() * c.g_best_cost) << ','
            << c.stats.value_messages << ',' << c.stats.cost_messages << ',' << c.stats.best_messages << '\n';
    }
}

namespace {

template <typename T>
T parse_field(std::string_view field, int line) {
    T value{};
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size()) {
        throw ParseError("trace CSV line " + std::to_string(line) + ": bad field `" + std::string(field) + "`");
    }
    return value;
}

}  // namespace

std::vector<TraceRow> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) throw ParseError("trace CSV: missing or unexpected header");
    std::vector<TraceRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 7) throw ParseError("trace CSV line " + std::to_string(line_no) + ": expected 7 fields");
        TraceRow r;
        r.cycle = parse_field<int>(f[0], line_no);
        r.elapsed_ms = parse_field<double>(f[1], line_no);
        r.hops = parse_field<long long>(f[2], line_no);
        r.g_best_cost = parse_field<double>(f[3], line_no);
        r.messages_value = parse_field<std::size_t>(f[4], line_no);
        r.messages_cost = parse_field<std::size_t>(f[5], line_no);
        r.messages_best = parse_field<std::size_t>(f[6], line_no);
        rows.push_back(r);
    }
    return rows;
}

double improvement_ratio(double base, double improved, Objective objective) {
    const double sign = objective == Objective::Max ? -1.0 : 1.0;
    const double b = sign * base;
    const double i = sign * improved;
    if (b == 0.0) return 0.0;
    return (b - i) / std::abs(b);
}

namespace {

void write_summary_json(const ExperimentSummary& s, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["setting"] = s.setting;
    doc["objective"] = s.objective == Objective::Max ? "max" : "min";
    doc["runs"] = s.runs.size();
    doc["invariants_ok"] = s.invariants_ok();
    for (const auto& v : s.variants) {
        const std::string name(variant_name(v.variant));
        doc["variants"][name]["mean_final_cost"] = v.mean_final_cost;
        doc["variants"][name]["instance_mean_final"] = v.instance_mean_final;
        doc["variants"][name]["mean_cost_per_cycle"] = v.mean_cost_per_cycle;
    }
    for (const auto& w : s.win_rates) {
        doc["win_rates"].push_back(
            {{"variant", variant_name(w.a)}, {"against", variant_name(w.b)}, {"rate", w.rate}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write summary " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing summary " + path.string());
}

bool message_counts_hold(const RunTrace& trace, std::size_t edges, std::size_t agents) {
    return std::all_of(trace.cycles.begin(), trace.cycles.end(), [&](const CycleRecord& c) {
        return c.stats.value_messages == 2 * edges && c.stats.cost_messages == agents - 1 &&
               c.stats.best_messages == agents - 1;
    });
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    const bool write = !cfg.output_dir.empty();
    if (write) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
    }

    ExperimentSummary summary;
    summary.setting = cfg.instance_file ? cfg.instance_file->filename().string() : family_name(cfg.bench->family);

    const auto nvar = cfg.variants.size();
    const auto cycles = static_cast<std::size_t>(cfg.swarm.max_cycles);
    std::vector<std::vector<double>> cycle_sums(nvar, std::vector<double>(cycles, 0.0));
    std::vector<std::vector<double>> instance_means(nvar);
    std::size_t runs_per_variant = 0;

    for (int i = 0; i < cfg.num_instances; ++i) {
        CdcopInstance inst;
        if (cfg.instance_file) {
            inst = load_instance(*cfg.instance_file);
        } else {
            BenchSpec spec = *cfg.bench;
            spec.seed = instance_seed(cfg.master_seed, i);
            inst = generate(spec);
        }
        if (const auto issues = validate_instance(inst); !issues.empty()) {
            throw ConfigError("invalid instance " + std::to_string(i) + ": " + issues.front());
        }
        summary.objective = inst.objective;
        const PseudoTree tree = build_bfs(inst, cfg.root);

        for (std::size_t v = 0; v < nvar; ++v) instance_means[v].push_back(0.0);
        for (int r = 0; r < cfg.repeats; ++r) {
            for (std::size_t v = 0; v < nvar; ++v) {
                const Variant variant = cfg.variants[v];
                SwarmConfig sc = cfg.swarm;
                sc.crossover = variant == Variant::PcdCrossover;
                sc.seed = run_seed(cfg.master_seed, i, r, variant);
                const RunTrace trace = solve(inst, tree, sc);

                RunSummary run;
                run.instance = i;
                run.repeat = r;
                run.variant = variant;
                run.seed = sc.seed;
                run.final_cost = trace.best_cost();
                run.anytime_ok = !check_anytime(trace).has_value();
                run.message_counts_ok = message_counts_hold(trace, edge_count(inst), static_cast<std::size_t>(inst.num_agents));
                run.message_size_ok = std::all_of(trace.cycles.begin(), trace.cycles.end(), [&](const CycleRecord& c) {
                    return within_message_size_bound(c.stats, tree, static_cast<std::size_t>(sc.particles), kMessageSizeSlack);
                });
                summary.runs.push_back(run);

                const auto reported = trace.reported_costs();
                for (std::size_t c = 0; c < cycles && c < reported.size(); ++c) cycle_sums[v][c] += reported[c];
                instance_means[v].back() += run.final_cost / cfg.repeats;

                if (write) {
                    const auto path = cfg.output_dir / trace_file_name(i, r, variant);
                    std::ofstream out(path, std::ios::binary);
                    if (!out) throw IoError("cannot write trace " + path.string());
                    write_trace_csv(out, trace, cfg.record_wall_clock);
                    if (!out) throw IoError("failed writing trace " + path.string());
                    ++summary.trace_files;
                }
            }
        }
    }
    runs_per_variant = static_cast<std::size_t>(cfg.num_instances) * static_cast<std::size_t>(cfg.repeats);

    for (std::size_t v = 0; v < nvar; ++v) {
        VariantSummary vs;
        vs.variant = cfg.variants[v];
        vs.mean_cost_per_cycle = cycle_sums[v];
        for (double& c : vs.mean_cost_per_cycle) c /= static_cast<double>(runs_per_variant);
        vs.instance_mean_final = instance_means[v];
        double total = 0.0;
        for (double m : vs.instance_mean_final) total += m;
        vs.mean_final_cost = total / static_cast<double>(vs.instance_mean_final.size());
        summary.variants.push_back(std::move(vs));
    }

    const double sign = summary.objective == Objective::Max ? -1.0 : 1.0;
    for (std::size_t a = 0; a < nvar; ++a) {
        for (std::size_t b = 0; b < nvar; ++b) {
            if (a == b) continue;
            const auto& ma = summary.variants[a].instance_mean_final;
            const auto& mb = summary.variants[b].instance_mean_final;
            std::size_t wins = 0;
            for (std::size_t i = 0; i < ma.size(); ++i) {
                if (sign * ma[i] <= sign * mb[i]) ++wins;
            }
            summary.win_rates.push_back({cfg.variants[a], cfg.variants[b],
                                         static_cast<double>(wins) / static_cast<double>(ma.size())});
        }
    }

    if (write) write_summary_json(summary, cfg.output_dir / "summary.json");
    return summary;
}

std::string emit_anytime_table(std::span<const ExperimentSummary> summaries, std::span<const Variant> columns,
                               std::optional<Variant> baseline) {
    std::ostringstream out;
    std::size_t setting_width = 7;
    for (const auto& s : summaries) setting_width = std::max(setting_width, s.setting.size());

    out << std::left << std::setw(static_cast<int>(setting_width)) << "setting";
    for (Variant v : columns) out << " | " << std::right << std::setw(16) << variant_name(v);
    if (baseline) {
        for (Variant v : columns) {
            if (v != *baseline) out << " | " << std::setw(24) << ("gain " + std::string(variant_name(v)));
        }
    }
    out << '\n';

    for (const auto& s : summaries) {
        out << std::left << std::setw(static_cast<int>(setting_width)) << s.setting;
        for (Variant v : columns) {
            const VariantSummary* vs = s.find(v);
            if (!vs) throw UnknownVariant("unknown variant \"" + std::string(variant_name(v)) + "\" in setting " + s.setting);
            out << " | " << std::right << std::setw(16) << std::fixed << std::setprecision(2) << vs->mean_final_cost;
        }
        if (baseline) {
            const VariantSummary* base = s.find(*baseline);
            if (!base) throw UnknownVariant("unknown variant \"" + std::string(variant_name(*baseline)) + "\"");
            for (Variant v : columns) {
                if (v == *baseline) continue;
                const double gain = improvement_ratio(base->mean_final_cost, s.find(v)->mean_final_cost, s.objective);
                out << " | " << std::setw(23) << std::fixed << std::setprecision(2) << 100.0 * gain << '%';
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cdcop
