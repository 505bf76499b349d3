#include "cdcop/config_io.hpp"

#include <fstream>
#include <set>

#include "cdcop/errors.hpp"

namespace cdcop {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

nlohmann::json swarm_config_to_json(const SwarmConfig& cfg) {
    nlohmann::json doc;
    doc["particles"] = cfg.particles;
    doc["c1"] = cfg.c1;
    doc["c2"] = cfg.c2;
    doc["inertia"] = std::visit(
        overloaded{
            [](const FixedInertia& f) { return nlohmann::json{{"type", "fixed"}, {"w", f.w}}; },
            [](const AdaptiveInertia& a) {
                return nlohmann::json{{"type", a.increasing ? "adaptive-literal" : "adaptive"},
                                      {"w_max", a.w_max},
                                      {"w_min", a.w_min}};
            },
            [](const ConstrictionInertia& c) { return nlohmann::json{{"type", "constriction"}, {"phi", c.phi}}; },
        },
        cfg.inertia);
    doc["max_sc"] = cfg.max_successes;
    doc["max_fc"] = cfg.max_failures;
    doc["t_max"] = cfg.max_cycles;
    doc["crossover"] = cfg.crossover;
    doc["seed"] = cfg.seed;
    return doc;
}

SwarmConfig swarm_config_from_json(const nlohmann::json& doc, SwarmConfig cfg) {
    static const std::set<std::string> known{"particles", "c1", "c2", "inertia", "max_sc",
                                             "max_fc", "t_max", "crossover", "seed"};
    try {
        for (const auto& [key, value] : doc.items()) {
            if (!known.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
        }
        if (doc.contains("particles")) cfg.particles = doc["particles"].get<int>();
        if (doc.contains("c1")) cfg.c1 = doc["c1"].get<double>();
        if (doc.contains("c2")) cfg.c2 = doc["c2"].get<double>();
        if (doc.contains("max_sc")) cfg.max_successes = doc["max_sc"].get<int>();
        if (doc.contains("max_fc")) cfg.max_failures = doc["max_fc"].get<int>();
        if (doc.contains("t_max")) cfg.max_cycles = doc["t_max"].get<int>();
        if (doc.contains("crossover")) cfg.crossover = doc["crossover"].get<bool>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("inertia")) {
            const auto& in = doc["inertia"];
            const std::string type = in.at("type").get<std::string>();
            if (type == "fixed") {
                cfg.inertia = FixedInertia{in.at("w").get<double>()};
            } else if (type == "adaptive" || type == "adaptive-literal") {
                AdaptiveInertia a;
                a.w_max = in.value("w_max", a.w_max);
                a.w_min = in.value("w_min", a.w_min);
                a.increasing = type == "adaptive-literal";
                cfg.inertia = a;
            } else if (type == "constriction") {
                cfg.inertia = ConstrictionInertia{in.value("phi", cfg.c1 + cfg.c2)};
            } else {
                throw ConfigError("unknown inertia type \"" + type + "\"");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed swarm config: ") + e.what());
    }
    return cfg;
}

SwarmConfig load_swarm_config(const std::filesystem::path& path, SwarmConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return swarm_config_from_json(doc, std::move(base));
}

}  // namespace cdcop
