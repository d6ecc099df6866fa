#include "ising/decomposition.hpp"

#include <algorithm>
#include <sstream>

#include "ising/error.hpp"
#include "ising/planarity.hpp"

namespace ising {

std::vector<std::vector<int>> DecompositionTree::children() const {
    std::vector<std::vector<int>> out(nodes.size());
    for (const auto& n : nodes)
        if (n.parent) out[*n.parent].push_back(n.id);
    return out;
}

std::vector<int> DecompositionTree::navel(int t) const {
    const auto& node = nodes[t];
    if (!node.parent) return {};
    const auto& p = nodes[*node.parent];
    std::vector<int> out;
    std::set_intersection(node.vertices.begin(), node.vertices.end(), p.vertices.begin(), p.vertices.end(),
                          std::back_inserter(out));
    return out;
}

std::vector<int> DecompositionTree::preorder() const {
    const auto kids = children();
    std::vector<int> order;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        order.push_back(t);
        for (auto it = kids[t].rbegin(); it != kids[t].rend(); ++it) stack.push_back(*it);
    }
    return order;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.kind;
        if (v.node >= 0) out << " (node " << v.node << ")";
        out << ": " << v.detail << '\n';
    }
    return out.str();
}

namespace {

std::string format_set(const std::vector<int>& s) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
    out << '}';
    return out.str();
}

// Node subgraph in local ids plus the extra pairs required by property 4.
Graph local_graph(const DecompositionNode& node, const std::vector<std::vector<int>>& extra_sets) {
    Graph g(static_cast<int>(node.vertices.size()));
    auto local = [&](int v) {
        return static_cast<int>(std::lower_bound(node.vertices.begin(), node.vertices.end(), v) - node.vertices.begin());
    };
    for (const auto& [u, v] : node.edges) {
        const int a = local(u), b = local(v);
        if (!g.has_edge(a, b)) g.add_edge(a, b);
    }
    for (const auto& set : extra_sets)
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t k = i + 1; k < set.size(); ++k) {
                const int a = local(set[i]), b = local(set[k]);
                if (!g.has_edge(a, b)) g.add_edge(a, b);
            }
    return g;
}

}  // namespace

ValidationReport validate(const DecompositionTree& tree_in, const Graph& g) {
    ValidationReport report;
    auto add = [&](std::string kind, int node, std::string detail) {
        report.violations.push_back({std::move(kind), node, std::move(detail)});
    };
    const int count = static_cast<int>(tree_in.nodes.size());
    if (count == 0) {
        add("structure", -1, "decomposition has no nodes");
        return report;
    }
    if (tree_in.c < 1) add("structure", -1, "c must be positive");
    for (int t = 0; t < count; ++t)
        if (tree_in.nodes[t].id != t) add("structure", t, "node ids must equal their position");
    if (tree_in.root < 0 || tree_in.root >= count) {
        add("structure", -1, "root id out of range");
        return report;
    }
    if (tree_in.nodes[tree_in.root].parent) add("structure", tree_in.root, "root has a parent");
    for (int t = 0; t < count; ++t) {
        const auto& p = tree_in.nodes[t].parent;
        if (t != tree_in.root && !p) add("structure", t, "non-root node without parent");
        if (p && (*p < 0 || *p >= count || *p == t)) add("structure", t, "invalid parent reference");
    }
    if (!report.ok()) return report;

    // reachability from the root (also rules out cycles)
    {
        const auto kids = tree_in.children();
        std::vector<char> seen(count, 0);
        std::vector<int> stack{tree_in.root};
        seen[tree_in.root] = 1;
        int reached = 0;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            ++reached;
            for (int c : kids[t])
                if (!seen[c]) {
                    seen[c] = 1;
                    stack.push_back(c);
                }
        }
        if (reached != count) {
            add("structure", -1, "parent links do not form a tree rooted at the root");
            return report;
        }
    }

    DecompositionTree tree = tree_in;
    const int n = g.vertex_count();
    for (auto& node : tree.nodes) {
        std::vector<int> sorted = node.vertices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            add("structure", node.id, "repeated vertex");
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v : sorted)
            if (v < 0 || v >= n) add("structure", node.id, "vertex " + std::to_string(v) + " out of range");
        node.vertices = sorted;
        for (auto& [u, v] : node.edges) {
            if (u > v) std::swap(u, v);
            if (!g.has_edge(u, v))
                add("coverage", node.id, "edge (" + std::to_string(u) + "," + std::to_string(v) + ") not in graph");
            if (!std::binary_search(sorted.begin(), sorted.end(), u) ||
                !std::binary_search(sorted.begin(), sorted.end(), v))
                add("structure", node.id,
                    "edge (" + std::to_string(u) + "," + std::to_string(v) + ") has an endpoint outside the node");
        }
    }
    if (!report.ok()) return report;

    // coverage and ownership
    std::vector<int> vertex_hits(n, 0);
    for (const auto& node : tree.nodes)
        for (int v : node.vertices) ++vertex_hits[v];
    for (int v = 0; v < n; ++v)
        if (!vertex_hits[v]) add("coverage", -1, "vertex " + std::to_string(v) + " is in no node");
    std::vector<std::vector<int>> owners(g.edge_count());
    for (const auto& node : tree.nodes)
        for (const auto& [u, v] : node.edges) owners[*g.find_edge(u, v)].push_back(node.id);
    for (int e = 0; e < g.edge_count(); ++e) {
        const std::string name = "(" + std::to_string(g.edge(e).u) + "," + std::to_string(g.edge(e).v) + ")";
        if (owners[e].empty()) add("coverage", -1, "edge " + name + " is owned by no node");
        if (owners[e].size() > 1) add("ownership", owners[e][1], "edge " + name + " is owned by several nodes");
    }

    // P1: subtree / rest intersection equals the navel
    const auto kids = tree.children();
    const auto order = tree.preorder();
    std::vector<int> sub_count(n, 0);
    for (int t : order) {
        std::fill(sub_count.begin(), sub_count.end(), 0);
        std::vector<int> stack{t};
        while (!stack.empty()) {
            const int s = stack.back();
            stack.pop_back();
            for (int v : tree.nodes[s].vertices) ++sub_count[v];
            for (int c : kids[s]) stack.push_back(c);
        }
        std::vector<int> shared;
        for (int v = 0; v < n; ++v)
            if (sub_count[v] > 0 && vertex_hits[v] - sub_count[v] > 0) shared.push_back(v);
        const auto navel = tree.navel(t);
        if (shared != navel)
            add("P1", t, "subtree meets the rest in " + format_set(shared) + " but the navel is " + format_set(navel));
        if (navel.size() > 3) add("P2", t, "attachment set " + format_set(navel) + " has more than 3 vertices");
    }

    // P3 / P4
    for (const auto& node : tree.nodes) {
        const int size = static_cast<int>(node.vertices.size());
        if (size <= tree.c) continue;
        if (!is_planar(local_graph(node, {})))
            add("P3", node.id, "nonplanar node with " + std::to_string(size) + " > c vertices");
        std::vector<std::vector<int>> sets{tree.navel(node.id)};
        for (int c : kids[node.id]) sets.push_back(tree.navel(c));
        if (!is_planar(local_graph(node, sets)))
            add("P4", node.id, "adding attachment-set edges destroys planarity");
    }
    return report;
}

DecompositionTree normalize_ownership(const DecompositionTree& tree, const Graph& g) {
    DecompositionTree out = tree;
    const auto order = tree.preorder();
    std::vector<int> depth(tree.nodes.size(), 0);
    for (int t : order)
        if (tree.nodes[t].parent) depth[t] = depth[*tree.nodes[t].parent] + 1;
    std::vector<std::vector<int>> containing(g.vertex_count());
    for (const auto& node : tree.nodes)
        for (int v : node.vertices) containing[v].push_back(node.id);
    for (auto& node : out.nodes) node.edges.clear();
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        std::vector<int> both;
        auto a = containing[ed.u], b = containing[ed.v];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
        if (both.empty())
            throw Error(ErrorCode::InvalidDecomposition,
                        "no node contains edge (" + std::to_string(ed.u) + "," + std::to_string(ed.v) + ")");
        int best = both.front();
        for (int t : both)
            if (depth[t] > depth[best]) best = t;
        out.nodes[best].edges.push_back({ed.u, ed.v});
    }
    return out;
}

DecompositionTree reroot(const DecompositionTree& tree, int new_root) {
    if (new_root < 0 || new_root >= static_cast<int>(tree.nodes.size()))
        throw Error(ErrorCode::InvalidInput, "new root out of range");
    DecompositionTree out = tree;
    // walk from the new root up to the old root, reversing the links
    std::optional<int> prev;
    int cur = new_root;
    while (true) {
        const std::optional<int> next = tree.nodes[cur].parent;
        out.nodes[cur].parent = prev;
        if (!next) break;
        prev = cur;
        cur = *next;
    }
    out.root = new_root;
    return out;
}

DecompositionTree single_node_decomposition(const Graph& g, int c) {
    DecompositionTree tree;
    tree.c = c;
    tree.root = 0;
    DecompositionNode node;
    node.id = 0;
    for (int v = 0; v < g.vertex_count(); ++v) node.vertices.push_back(v);
    for (const auto& e : g.edges()) node.edges.push_back({e.u, e.v});
    tree.nodes.push_back(std::move(node));
    return tree;
}

}  // namespace ising
