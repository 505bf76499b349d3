#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cdcop/instance.hpp"

namespace cdcop {

/// BFS spanning tree over the constraint graph. Non-tree edges stay in
/// `neighbors` and carry VALUE traffic only.
struct PseudoTree {
    AgentId root = 0;
    std::vector<std::optional<AgentId>> parent;
    std::vector<std::vector<AgentId>> children;   // ascending
    std::vector<std::vector<AgentId>> neighbors;  // ascending
    std::vector<int> depth;
    int height = 0;

    std::size_t size() const { return parent.size(); }
    bool is_root(AgentId a) const { return a == root; }

    friend bool operator==(const PseudoTree&, const PseudoTree&) = default;
};

/// Breadth-first from `root`; unvisited neighbors are enqueued in ascending id.
/// Throws Disconnected if some agent is unreachable.
PseudoTree build_bfs(const CdcopInstance& inst, AgentId root = 0);

inline int height(const PseudoTree& tree) { return tree.height; }

std::vector<std::string> validate_pseudo_tree(const PseudoTree& tree, const CdcopInstance& inst);

/// One line per constraint edge: `a b tree|non-tree`, tree edges as parent child.
void write_tree_edges(std::ostream& out, const PseudoTree& tree);

}  // namespace cdcop
