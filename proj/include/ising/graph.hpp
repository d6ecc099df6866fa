#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ising {

struct Edge {
    int u;
    int v;  // u < v always
};

struct Incidence {
    int neighbor;
    int edge;
};

// Simple undirected graph on vertices 0..n-1. Edge ids are dense and stable
// in insertion order; endpoints are stored with u < v.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    int add_vertex();
    // Throws InvalidInput on loops, duplicates or out-of-range endpoints.
    int add_edge(int u, int v);

    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Incidence>& incident(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }

    std::optional<int> find_edge(int u, int v) const;
    bool has_edge(int u, int v) const { return find_edge(u, v).has_value(); }

    int other(int e, int v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }

private:
    static std::uint64_t key(int u, int v);

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adj_;
    std::unordered_map<std::uint64_t, int> index_;
};

// A graph together with the ids its vertices and edges carry in a host graph.
struct Subgraph {
    Graph graph;
    std::vector<int> to_host;       // local vertex -> host vertex
    std::vector<int> edge_to_host;  // local edge -> host edge
};

// Induced subgraph on `vertices` (local order follows the given order).
Subgraph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

// Components ordered by smallest vertex id; each sorted ascending.
std::vector<std::vector<int>> connected_components(const Graph& g);
// Same, ignoring vertices with removed[v] != 0.
std::vector<std::vector<int>> connected_components(const Graph& g, const std::vector<char>& removed);
int count_components(const Graph& g, const std::vector<char>& removed);

bool is_connected(const Graph& g);
bool is_connected_set(const Graph& g, const std::vector<int>& set);

struct BiconnectedComponents {
    std::vector<std::vector<int>> components;  // edge ids, ordered by smallest edge id
    std::vector<int> cut_vertices;             // ascending
};

BiconnectedComponents biconnected_components(const Graph& g);

// Lexicographically smallest X with |X| = i such that g - X has at least j
// components. Supported (i, j): (2, 2), (3, 3) and (3, 2).
std::optional<std::vector<int>> find_cut(const Graph& g, int i, int j);

struct EdgeOrigin {
    int edge;    // edge id in the original graph
    int folded;  // endpoint inside the contracted set, or -1
};

struct ContractedGraph {
    Graph graph;
    std::vector<int> merge_map;                     // original vertex -> contracted vertex
    std::vector<std::vector<EdgeOrigin>> origins;   // contracted edge -> originals
    std::vector<int> internal_edges;                // original edges inside the set
    int merged_vertex = -1;
};

// Replaces the connected set `s` by one vertex placed at the position of
// min(s); remaining vertices keep their relative order. Parallel edges are
// collapsed and recorded in `origins`. Throws DisconnectedSet.
ContractedGraph contract_vertex_set(const Graph& g, const std::vector<int>& s);

}  // namespace ising
