// Command-line driver: gen, solve, experiment, oracle, defaults.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cdcop/benchgen.hpp"
#include "cdcop/config_io.hpp"
#include "cdcop/errors.hpp"
#include "cdcop/experiment.hpp"
#include "cdcop/oracle.hpp"
#include "cdcop/pseudo_tree.hpp"
#include "cdcop/solver.hpp"

namespace {

using namespace cdcop;

struct BenchFlags {
    std::string family = "er";
    int n = 0;
    double p = 0.2;
    int m = 3;
    int rows = 8;
    int cols = 8;
    std::optional<double> lb;
    std::optional<double> ub;
    double coeff_lo = -5.0;
    double coeff_hi = 5.0;
    std::uint64_t seed = 0;

    void attach(CLI::App& app) {
        app.add_option("--family", family, "er | tree | ba | sensor")->check(CLI::IsMember({"er", "tree", "ba", "sensor"}));
        app.add_option("--n", n, "agent count (er/tree default 50, ba default 100)");
        app.add_option("--p", p, "Erdos-Renyi edge probability");
        app.add_option("--m", m, "Barabasi-Albert attachments per new node");
        app.add_option("--rows", rows, "sensor grid rows");
        app.add_option("--cols", cols, "sensor grid columns");
        app.add_option("--lb", lb, "domain lower bound override");
        app.add_option("--ub", ub, "domain upper bound override");
        app.add_option("--coeff-lo", coeff_lo, "quadratic coefficient lower bound");
        app.add_option("--coeff-hi", coeff_hi, "quadratic coefficient upper bound");
    }

    BenchSpec spec() const {
        BenchSpec s;
        if (family == "er") {
            s.family = ErdosRenyiSpec{n > 0 ? n : 50, p};
        } else if (family == "tree") {
            s.family = RandomTreeSpec{n > 0 ? n : 50};
        } else if (family == "ba") {
            s.family = BarabasiAlbertSpec{n > 0 ? n : 100, m};
        } else {
            s.family = SensorGridSpec{rows, cols};
        }
        if (lb || ub) {
            const Domain def = default_domain(s.family);
            s.domain = Domain{lb.value_or(def.lb), ub.value_or(def.ub)};
        }
        s.coefficients = {coeff_lo, coeff_hi};
        s.seed = seed;
        return s;
    }
};

struct SwarmFlags {
    std::string config_file;
    std::optional<int> particles;
    std::optional<double> c1, c2;
    std::string inertia;
    std::optional<double> w, w_max, w_min, phi;
    std::optional<int> max_sc, max_fc, cycles;
    bool crossover = false;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App& app, bool with_crossover) {
        app.add_option("--config", config_file, "JSON swarm config (keys as printed by `defaults`)");
        app.add_option("-K,--particles", particles, "particles per agent");
        app.add_option("--c1", c1, "cognitive constant");
        app.add_option("--c2", c2, "social constant");
        app.add_option("--inertia", inertia, "fixed | adaptive | adaptive-literal | constriction")
            ->check(CLI::IsMember({"fixed", "adaptive", "adaptive-literal", "constriction"}));
        app.add_option("--w", w, "fixed inertia weight");
        app.add_option("--w-max", w_max, "adaptive inertia start");
        app.add_option("--w-min", w_min, "adaptive inertia end");
        app.add_option("--phi", phi, "constriction phi (defaults to c1 + c2)");
        app.add_option("--max-sc", max_sc, "success threshold");
        app.add_option("--max-fc", max_fc, "failure threshold");
        app.add_option("--cycles,--t-max", cycles, "cycle budget");
        if (with_crossover) app.add_flag("--crossover", crossover, "run PCD_CrossOver");
        app.add_option("--seed", seed, "random seed");
    }

    SwarmConfig resolve() const {
        SwarmConfig cfg;
        if (!config_file.empty()) cfg = load_swarm_config(config_file, cfg);
        if (particles) cfg.particles = *particles;
        if (c1) cfg.c1 = *c1;
        if (c2) cfg.c2 = *c2;
        if (max_sc) cfg.max_successes = *max_sc;
        if (max_fc) cfg.max_failures = *max_fc;
        if (cycles) cfg.max_cycles = *cycles;
        if (crossover) cfg.crossover = true;
        if (seed) cfg.seed = *seed;
        if (inertia == "fixed") {
            cfg.inertia = FixedInertia{w.value_or(FixedInertia{}.w)};
        } else if (inertia == "adaptive" || inertia == "adaptive-literal") {
            AdaptiveInertia a;
            a.w_max = w_max.value_or(a.w_max);
            a.w_min = w_min.value_or(a.w_min);
            a.increasing = inertia == "adaptive-literal";
            cfg.inertia = a;
        } else if (inertia == "constriction") {
            cfg.inertia = ConstrictionInertia{phi.value_or(cfg.c1 + cfg.c2)};
        }
        validate_config(cfg);
        return cfg;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

int run_gen(const BenchFlags& bench, const std::string& output) {
    const CdcopInstance inst = generate(bench.spec());
    if (output.empty() || output == "-") {
        std::cout << serialize_instance(inst);
    } else {
        save_instance(inst, output);
        std::cerr << "wrote " << output << ": " << inst.num_agents << " agents, " << edge_count(inst) << " functions\n";
    }
    return 0;
}

int run_solve(const std::string& file, const SwarmFlags& flags, AgentId root, const std::string& trace_path,
              const std::string& tree_path, const std::string& log_path, bool wall_clock) {
    const CdcopInstance inst = load_instance(file);
    if (const auto issues = validate_instance(inst); !issues.empty()) {
        for (const auto& i : issues) std::cerr << "invalid instance: " << i << '\n';
        return 2;
    }
    const SwarmConfig cfg = flags.resolve();
    const PseudoTree tree = build_bfs(inst, root);
    if (!tree_path.empty()) {
        auto out = open_out(tree_path);
        write_tree_edges(out, tree);
    }

    PcdSolver solver(inst, tree, cfg);
    std::ofstream log;
    if (!log_path.empty()) {
        log = open_out(log_path);
        log << "cycle,kind,from,to,payload_len\n";
        solver.set_message_log(&log);
    }
    const RunTrace& trace = solver.run();
    if (!trace_path.empty()) {
        auto out = open_out(trace_path);
        write_trace_csv(out, trace, wall_clock);
    }

    const bool anytime = !check_anytime(trace).has_value();
    bool counts = true;
    bool sizes = true;
    for (const auto& c : trace.cycles) {
        counts = counts && c.stats.value_messages == 2 * edge_count(inst) &&
                 c.stats.cost_messages == static_cast<std::size_t>(inst.num_agents - 1) &&
                 c.stats.best_messages == static_cast<std::size_t>(inst.num_agents - 1);
        sizes = sizes && within_message_size_bound(c.stats, tree, static_cast<std::size_t>(cfg.particles), kMessageSizeSlack);
    }
    std::cout << "cycles:        " << trace.cycles.size() << '\n'
              << "tree height:   " << tree.height << '\n'
              << "best cost:     " << format_number(trace.best_cost()) << '\n'
              << "anytime:       " << (anytime ? "ok" : "VIOLATED") << '\n'
              << "message count: " << (counts ? "ok" : "VIOLATED") << '\n'
              << "message size:  " << (sizes ? "ok" : "VIOLATED") << '\n'
              << "assignment:   ";
    for (double x : trace.best_assignment) std::cout << ' ' << format_number(x);
    std::cout << '\n';
    return anytime && counts && sizes ? 0 : 1;
}

int run_oracle(const std::string& file, int points, int max_dims) {
    const CdcopInstance inst = load_instance(file);
    const GridOptimum opt = grid_optimum(inst, GridSearchSpec{points, max_dims});
    std::cout << "grid optimum: " << format_number(inst.reported(opt.cost)) << "\nassignment:  ";
    for (double x : opt.assignment) std::cout << ' ' << format_number(x);
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous DCOP toolkit: PCD / PCD_CrossOver solver, benchmark generators, oracles"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a benchmark instance file");
    BenchFlags gen_bench;
    std::string gen_out;
    gen_bench.attach(*gen);
    gen->add_option("--seed", gen_bench.seed, "generator seed");
    gen->add_option("-o,--output", gen_out, "output path (stdout when omitted)");

    auto* solve_cmd = app.add_subcommand("solve", "run PCD on an instance file");
    std::string solve_file, trace_path, tree_path, log_path;
    SwarmFlags solve_flags;
    AgentId solve_root = 0;
    bool no_wall_clock = false;
    solve_cmd->add_option("instance", solve_file, "instance JSON")->required();
    solve_flags.attach(*solve_cmd, true);
    solve_cmd->add_option("--root", solve_root, "pseudo-tree root agent");
    solve_cmd->add_option("--trace", trace_path, "write the per-cycle trace CSV");
    solve_cmd->add_option("--tree-dump", tree_path, "write the pseudo-tree edge list");
    solve_cmd->add_option("--message-log", log_path, "write every message as CSV");
    solve_cmd->add_flag("--no-wall-clock", no_wall_clock, "write elapsed_ms as 0 for byte-reproducible traces");

    auto* exp = app.add_subcommand("experiment", "run variants over instance and seed ensembles");
    std::string exp_file, exp_out, exp_variants = "PCD,PCD_CrossOver";
    BenchFlags exp_bench;
    SwarmFlags exp_flags;
    int exp_instances = 1, exp_repeats = 1;
    std::uint64_t master_seed = 0;
    AgentId exp_root = 0;
    bool exp_no_wall_clock = false;
    exp->add_option("--instance", exp_file, "instance JSON (instead of a generated family)");
    exp_bench.attach(*exp);
    exp_flags.attach(*exp, false);
    exp->add_option("--instances", exp_instances, "generated instances");
    exp->add_option("--repeats", exp_repeats, "runs per instance and variant");
    exp->add_option("--variants", exp_variants, "comma-separated: PCD,PCD_CrossOver");
    exp->add_option("--master-seed", master_seed, "seed for instances and runs");
    exp->add_option("--root", exp_root, "pseudo-tree root agent");
    exp->add_option("-o,--out", exp_out, "output directory for traces and summary.json");
    exp->add_flag("--no-wall-clock", exp_no_wall_clock, "write elapsed_ms as 0 for byte-reproducible traces");

    auto* oracle = app.add_subcommand("oracle", "exhaustive grid optimum of a small instance");
    std::string oracle_file;
    int points = 21, max_dims = 6;
    oracle->add_option("instance", oracle_file, "instance JSON")->required();
    oracle->add_option("--points", points, "lattice points per dimension");
    oracle->add_option("--max-dims", max_dims, "refuse instances with more agents");

    auto* defaults = app.add_subcommand("defaults", "print the default swarm configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return run_gen(gen_bench, gen_out);
        if (*solve_cmd) {
            return run_solve(solve_file, solve_flags, solve_root, trace_path, tree_path, log_path, !no_wall_clock);
        }
        if (*oracle) return run_oracle(oracle_file, points, max_dims);
        if (*defaults) {
            std::cout << swarm_config_to_json(SwarmConfig{}).dump(2) << '\n';
            return 0;
        }
        if (*exp) {
            ExperimentConfig cfg;
            if (!exp_file.empty()) {
                cfg.instance_file = exp_file;
            } else {
                cfg.bench = exp_bench.spec();
            }
            cfg.swarm = exp_flags.resolve();
            cfg.variants.clear();
            std::stringstream names(exp_variants);
            for (std::string name; std::getline(names, name, ',');) cfg.variants.push_back(parse_variant(name));
            cfg.num_instances = exp_instances;
            cfg.repeats = exp_repeats;
            cfg.master_seed = master_seed;
            cfg.root = exp_root;
            cfg.output_dir = exp_out;
            cfg.record_wall_clock = !exp_no_wall_clock;
            const ExperimentSummary summary = run_experiment(cfg);
            const std::optional<Variant> baseline =
                cfg.variants.size() > 1 ? std::optional<Variant>(cfg.variants.front()) : std::nullopt;
            std::cout << emit_anytime_table({&summary, 1}, cfg.variants, baseline);
            for (const auto& w : summary.win_rates) {
                std::cout << "win rate " << variant_name(w.a) << " vs " << variant_name(w.b) << ": " << w.rate << '\n';
            }
            if (summary.trace_files > 0) std::cout << "trace files: " << summary.trace_files << " in " << exp_out << '\n';
            std::cout << "invariants: " << (summary.invariants_ok() ? "ok" : "VIOLATED") << '\n';
            return summary.invariants_ok() ? 0 : 1;
        }
    } catch (const cdcop::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
