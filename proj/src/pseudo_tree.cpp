#include "cdcop/pseudo_tree.hpp"

#include <algorithm>
#include <ostream>
#include <queue>

#include "cdcop/errors.hpp"

namespace cdcop {

PseudoTree build_bfs(const CdcopInstance& inst, AgentId root) {
    const auto n = static_cast<std::size_t>(inst.num_agents);
    if (root < 0 || static_cast<std::size_t>(root) >= n) {
        throw ConfigError("root agent " + std::to_string(root) + " out of range");
    }
    PseudoTree tree;
    tree.root = root;
    tree.neighbors = constraint_neighbors(inst);
    tree.parent.assign(n, std::nullopt);
    tree.children.assign(n, {});
    tree.depth.assign(n, -1);

    std::queue<AgentId> frontier;
    frontier.push(root);
    tree.depth[static_cast<std::size_t>(root)] = 0;
    std::size_t visited = 1;
    while (!frontier.empty()) {
        const AgentId a = frontier.front();
        frontier.pop();
        const auto ai = static_cast<std::size_t>(a);
        for (AgentId b : tree.neighbors[ai]) {
            const auto bi = static_cast<std::size_t>(b);
            if (tree.depth[bi] >= 0) continue;
            tree.depth[bi] = tree.depth[ai] + 1;
            tree.parent[bi] = a;
            tree.children[ai].push_back(b);
            tree.height = std::max(tree.height, tree.depth[bi]);
            ++visited;
            frontier.push(b);
        }
    }
    if (visited != n) {
        throw Disconnected("constraint graph is disconnected: BFS from agent " + std::to_string(root) +
                           " reached " + std::to_string(visited) + " of " + std::to_string(n) + " agents");
    }
    return tree;
}

std::vector<std::string> validate_pseudo_tree(const PseudoTree& tree, const CdcopInstance& inst) {
    std::vector<std::string> issues;
    const auto n = static_cast<std::size_t>(inst.num_agents);
    if (tree.parent.size() != n || tree.children.size() != n || tree.neighbors.size() != n) {
        issues.push_back("tree arrays do not match the agent count");
        return issues;
    }
    if (tree.root < 0 || static_cast<std::size_t>(tree.root) >= n) {
        issues.push_back("root out of range");
        return issues;
    }
    if (tree.parent[static_cast<std::size_t>(tree.root)]) issues.push_back("root has a parent");

    const auto graph = constraint_neighbors(inst);
    for (std::size_t a = 0; a < n; ++a) {
        const auto& nb = tree.neighbors[a];
        if (nb != graph[a]) issues.push_back("agent " + std::to_string(a) + ": neighbor set differs from constraint graph");
        if (static_cast<AgentId>(a) != tree.root && !tree.parent[a]) {
            issues.push_back("agent " + std::to_string(a) + ": non-root without parent");
        }
        if (const auto p = tree.parent[a]) {
            const auto& siblings = tree.children[static_cast<std::size_t>(*p)];
            if (std::find(siblings.begin(), siblings.end(), static_cast<AgentId>(a)) == siblings.end()) {
                issues.push_back("agent " + std::to_string(a) + ": parent does not list it as a child");
            }
        }
        for (AgentId c : tree.children[a]) {
            if (c < 0 || static_cast<std::size_t>(c) >= n) {
                issues.push_back("agent " + std::to_string(a) + ": child out of range");
                continue;
            }
            if (!std::binary_search(graph[a].begin(), graph[a].end(), c)) {
                issues.push_back("agent " + std::to_string(a) + ": child " + std::to_string(c) + " is not a neighbor");
            }
            if (tree.parent[static_cast<std::size_t>(c)] != static_cast<AgentId>(a)) {
                issues.push_back("agent " + std::to_string(a) + ": child " + std::to_string(c) + " has another parent");
            }
        }
    }

    // Walk parent links from every agent; a cycle never reaches the root.
    int max_depth = 0;
    for (std::size_t a = 0; a < n; ++a) {
        std::size_t steps = 0;
        std::optional<AgentId> cur = static_cast<AgentId>(a);
        while (cur && *cur != tree.root && steps <= n) {
            cur = tree.parent[static_cast<std::size_t>(*cur)];
            ++steps;
        }
        if (!cur || *cur != tree.root) {
            issues.push_back("agent " + std::to_string(a) + ": parent chain does not reach the root (cycle)");
        } else {
            max_depth = std::max(max_depth, static_cast<int>(steps));
        }
    }
    if (issues.empty() && max_depth != tree.height) {
        issues.push_back("height " + std::to_string(tree.height) + " differs from max depth " + std::to_string(max_depth));
    }
    return issues;
}

void write_tree_edges(std::ostream& out, const PseudoTree& tree) {
    for (std::size_t a = 0; a < tree.neighbors.size(); ++a) {
        for (AgentId b : tree.neighbors[a]) {
            if (static_cast<std::size_t>(b) <= a) continue;
            const auto bi = static_cast<std::size_t>(b);
            if (tree.parent[bi] == static_cast<AgentId>(a)) {
                out << a << ' ' << b << " tree\n";
            } else if (tree.parent[a] == b) {
                out << b << ' ' << a << " tree\n";
            } else {
                out << a << ' ' << b << " non-tree\n";
            }
        }
    }
}

}  // namespace cdcop
