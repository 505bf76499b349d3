#include "cdcop/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "cdcop/errors.hpp"

namespace cdcop {

double constraint_cost(const CdcopInstance& inst, std::size_t fn, const Assignment& asg) {
    const CostFunction& f = inst.functions.at(fn);
    const double value = f.expr.evaluate(asg[static_cast<std::size_t>(f.scope[0])],
                                         asg[static_cast<std::size_t>(f.scope[1])]);
    return inst.sign() * value;
}

double global_cost(const CdcopInstance& inst, const Assignment& asg) {
    double total = 0.0;
    for (std::size_t i = 0; i < inst.functions.size(); ++i) total += constraint_cost(inst, i, asg);
    return total;
}

std::vector<std::size_t> incident_functions(const CdcopInstance& inst, AgentId agent) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < inst.functions.size(); ++i) {
        const auto& scope = inst.functions[i].scope;
        if (scope[0] == agent || scope[1] == agent) out.push_back(i);
    }
    return out;
}

std::vector<std::vector<Incidence>> build_incidence(const CdcopInstance& inst) {
    std::vector<std::vector<Incidence>> out(static_cast<std::size_t>(inst.num_agents));
    for (std::size_t i = 0; i < inst.functions.size(); ++i) {
        const auto& scope = inst.functions[i].scope;
        out[static_cast<std::size_t>(scope[0])].push_back({i, scope[1], 0});
        out[static_cast<std::size_t>(scope[1])].push_back({i, scope[0], 1});
    }
    return out;
}

std::vector<std::vector<AgentId>> constraint_neighbors(const CdcopInstance& inst) {
    std::vector<std::vector<AgentId>> out(static_cast<std::size_t>(inst.num_agents));
    for (const auto& f : inst.functions) {
        out[static_cast<std::size_t>(f.scope[0])].push_back(f.scope[1]);
        out[static_cast<std::size_t>(f.scope[1])].push_back(f.scope[0]);
    }
    for (auto& list : out) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return out;
}

std::size_t edge_count(const CdcopInstance& inst) { return inst.functions.size(); }

std::vector<std::string> validate_instance(const CdcopInstance& inst) {
    std::vector<std::string> issues;
    if (inst.num_agents < 1) {
        issues.push_back("instance must have at least one agent");
        return issues;
    }
    if (inst.domains.size() != static_cast<std::size_t>(inst.num_agents)) {
        issues.push_back("domain count " + std::to_string(inst.domains.size()) +
                         " does not match num_agents " + std::to_string(inst.num_agents));
    }
    for (std::size_t i = 0; i < inst.domains.size(); ++i) {
        const Domain& d = inst.domains[i];
        if (!std::isfinite(d.lb) || !std::isfinite(d.ub)) {
            issues.push_back("non-finite domain for agent " + std::to_string(i));
        } else if (d.lb == d.ub) {
            issues.push_back("degenerate domain for agent " + std::to_string(i));
        } else if (d.lb > d.ub) {
            issues.push_back("inverted domain for agent " + std::to_string(i));
        }
    }

    std::set<int> ids;
    std::set<std::pair<AgentId, AgentId>> pairs;
    bool scopes_ok = true;
    for (const auto& f : inst.functions) {
        const std::string tag = "function " + std::to_string(f.id);
        if (!ids.insert(f.id).second) issues.push_back(tag + ": duplicate id");
        const auto [a, b] = f.scope;
        if (a < 0 || b < 0 || a >= inst.num_agents || b >= inst.num_agents) {
            issues.push_back(tag + ": scope references unknown agent");
            scopes_ok = false;
            continue;
        }
        if (a == b) {
            issues.push_back(tag + ": self-loop scope");
            continue;
        }
        if (!pairs.insert(std::minmax(a, b)).second) issues.push_back(tag + ": duplicate scope pair");
        if (!f.expr.references(0) || !f.expr.references(1)) {
            issues.push_back(tag + ": expression does not reference both scope variables");
        }
    }

    if (scopes_ok) {
        const auto nbrs = constraint_neighbors(inst);
        std::vector<char> seen(static_cast<std::size_t>(inst.num_agents), 0);
        std::queue<AgentId> frontier;
        frontier.push(0);
        seen[0] = 1;
        std::size_t reached = 1;
        while (!frontier.empty()) {
            const AgentId a = frontier.front();
            frontier.pop();
            for (AgentId b : nbrs[static_cast<std::size_t>(a)]) {
                if (!seen[static_cast<std::size_t>(b)]) {
                    seen[static_cast<std::size_t>(b)] = 1;
                    ++reached;
                    frontier.push(b);
                }
            }
        }
        if (reached != static_cast<std::size_t>(inst.num_agents)) issues.push_back("disconnected graph");
    }
    return issues;
}

nlohmann::json instance_to_json(const CdcopInstance& inst) {
    nlohmann::json doc;
    doc["num_agents"] = inst.num_agents;
    doc["objective"] = inst.objective == Objective::Max ? "max" : "min";
    auto domains = nlohmann::json::array();
    for (const auto& d : inst.domains) domains.push_back({d.lb, d.ub});
    doc["domains"] = std::move(domains);
    auto functions = nlohmann::json::array();
    for (const auto& f : inst.functions) {
        functions.push_back({{"id", f.id}, {"scope", {f.scope[0], f.scope[1]}}, {"expr", f.expr.to_string()}});
    }
    doc["functions"] = std::move(functions);
    return doc;
}

CdcopInstance instance_from_json(const nlohmann::json& doc) {
    CdcopInstance inst;
    try {
        inst.num_agents = doc.at("num_agents").get<int>();
        const std::string objective = doc.value("objective", std::string("min"));
        if (objective == "min") {
            inst.objective = Objective::Min;
        } else if (objective == "max") {
            inst.objective = Objective::Max;
        } else {
            throw ParseError("objective must be \"min\" or \"max\", got \"" + objective + "\"");
        }
        for (const auto& d : doc.at("domains")) {
            inst.domains.push_back(Domain{d.at(0).get<double>(), d.at(1).get<double>()});
        }
        for (const auto& f : doc.at("functions")) {
            CostFunction fn;
            fn.id = f.at("id").get<int>();
            fn.scope = {f.at("scope").at(0).get<AgentId>(), f.at("scope").at(1).get<AgentId>()};
            fn.expr = Expression::parse(f.at("expr").get<std::string>());
            inst.functions.push_back(std::move(fn));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed instance document: ") + e.what());
    }
    return inst;
}

std::string serialize_instance(const CdcopInstance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

CdcopInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return instance_from_json(doc);
}

void save_instance(const CdcopInstance& inst, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write instance file " + path.string());
    out << serialize_instance(inst);
    if (!out) throw IoError("failed writing instance file " + path.string());
}

}  // namespace cdcop
