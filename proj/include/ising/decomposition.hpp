#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ising/graph.hpp"

namespace ising {

struct DecompositionNode {
    int id = 0;
    std::optional<int> parent;
    std::vector<int> vertices;                 // host vertex ids, ascending
    std::vector<std::pair<int, int>> edges;    // host edges owned by this node (u < v)
};

// Rooted tree of subgraphs glued along small vertex sets. Node ids equal
// their index in `nodes`.
struct DecompositionTree {
    int c = 8;
    int root = 0;
    std::vector<DecompositionNode> nodes;

    std::vector<std::vector<int>> children() const;
    // V(G_t) intersected with V(G_parent); empty for the root. Ascending.
    std::vector<int> navel(int t) const;
    // Nodes in an order where parents precede children.
    std::vector<int> preorder() const;
};

struct Violation {
    std::string kind;  // structure, coverage, ownership, P1, P2, P3, P4
    int node = -1;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const DecompositionTree& tree, const Graph& g);

// Reassigns every edge of g to the deepest node containing both endpoints
// (ties: smallest node id). Requires a structurally valid tree.
DecompositionTree normalize_ownership(const DecompositionTree& tree, const Graph& g);

// Same node sets, re-rooted at `new_root`.
DecompositionTree reroot(const DecompositionTree& tree, int new_root);

// One planar node holding the whole graph.
DecompositionTree single_node_decomposition(const Graph& g, int c = 8);

}  // namespace ising
