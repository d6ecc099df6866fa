#include "ising/graph.hpp"

#include <algorithm>
#include <string>

#include "ising/error.hpp"

namespace ising {

Graph::Graph(int n) : n_(n), adj_(n) {
    if (n < 0) throw Error(ErrorCode::InvalidInput, "negative vertex count");
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
    for (const auto& [u, v] : edges) add_edge(u, v);
}

std::uint64_t Graph::key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

int Graph::add_vertex() {
    adj_.emplace_back();
    return n_++;
}

int Graph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
        throw Error(ErrorCode::InvalidInput,
                    "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) throw Error(ErrorCode::InvalidInput, "loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    const int id = edge_count();
    if (!index_.emplace(key(u, v), id).second)
        throw Error(ErrorCode::InvalidInput,
                    "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    edges_.push_back({u, v});
    adj_[u].push_back({v, id});
    adj_[v].push_back({u, id});
    return id;
}

std::optional<int> Graph::find_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return std::nullopt;
    auto it = index_.find(key(u, v));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Subgraph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
    std::vector<int> local(g.vertex_count(), -1);
    Subgraph sub;
    sub.graph = Graph(static_cast<int>(vertices.size()));
    sub.to_host = vertices;
    for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        if (local[ed.u] >= 0 && local[ed.v] >= 0) {
            sub.graph.add_edge(local[ed.u], local[ed.v]);
            sub.edge_to_host.push_back(e);
        }
    }
    return sub;
}

std::vector<std::vector<int>> connected_components(const Graph& g, const std::vector<char>& removed) {
    const int n = g.vertex_count();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> comps;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (seen[s] || removed[s]) continue;
        comps.emplace_back();
        auto& comp = comps.back();
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (const auto& inc : g.incident(v)) {
                if (!seen[inc.neighbor] && !removed[inc.neighbor]) {
                    seen[inc.neighbor] = 1;
                    stack.push_back(inc.neighbor);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
    }
    return comps;
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
    return connected_components(g, std::vector<char>(g.vertex_count(), 0));
}

int count_components(const Graph& g, const std::vector<char>& removed) {
    return static_cast<int>(connected_components(g, removed).size());
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

bool is_connected_set(const Graph& g, const std::vector<int>& set) {
    if (set.empty()) return true;
    std::vector<char> in(g.vertex_count(), 0);
    for (int v : set) in[v] = 1;
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<int> stack{set.front()};
    seen[set.front()] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++reached;
        for (const auto& inc : g.incident(v)) {
            if (in[inc.neighbor] && !seen[inc.neighbor]) {
                seen[inc.neighbor] = 1;
                stack.push_back(inc.neighbor);
            }
        }
    }
    std::size_t distinct = 0;
    for (char c : in) distinct += c;
    return reached == distinct;
}

namespace {

// Iterative Tarjan lowpoint search over g minus `removed`. Records, for
// every vertex, how many pieces its own component falls into when the
// vertex is deleted, and optionally the biconnected blocks as edge lists.
struct LowpointSearch {
    std::vector<int> after_removal;
    std::vector<std::vector<int>> blocks;
    int components = 0;

    LowpointSearch(const Graph& g, const std::vector<char>& removed, bool collect_blocks) {
        const int n = g.vertex_count();
        std::vector<int> disc(n, -1), low(n, 0), sep(n, 0);
        std::vector<char> is_root(n, 0);
        after_removal.assign(n, 0);
        struct Frame {
            int v;
            int parent_edge;
            std::size_t next;
        };
        std::vector<Frame> frames;
        std::vector<int> edge_stack;
        int timer = 0;
        for (int r = 0; r < n; ++r) {
            if (removed[r] || disc[r] >= 0) continue;
            ++components;
            is_root[r] = 1;
            disc[r] = low[r] = timer++;
            frames.push_back({r, -1, 0});
            while (!frames.empty()) {
                Frame& f = frames.back();
                const int v = f.v;
                const auto& inc = g.incident(v);
                if (f.next < inc.size()) {
                    const auto [w, e] = inc[f.next++];
                    if (e == f.parent_edge || removed[w]) continue;
                    if (disc[w] < 0) {
                        if (collect_blocks) edge_stack.push_back(e);
                        disc[w] = low[w] = timer++;
                        frames.push_back({w, e, 0});
                    } else if (disc[w] < disc[v]) {
                        if (collect_blocks) edge_stack.push_back(e);
                        low[v] = std::min(low[v], disc[w]);
                    }
                    continue;
                }
                const int parent_edge = f.parent_edge;
                frames.pop_back();
                if (frames.empty()) break;
                const int p = frames.back().v;
                low[p] = std::min(low[p], low[v]);
                if (low[v] >= disc[p]) {
                    ++sep[p];
                    if (collect_blocks) {
                        std::vector<int> block;
                        while (true) {
                            int e = edge_stack.back();
                            edge_stack.pop_back();
                            block.push_back(e);
                            if (e == parent_edge) break;
                        }
                        blocks.push_back(std::move(block));
                    }
                }
            }
        }
        for (int v = 0; v < n; ++v) {
            if (removed[v]) continue;
            after_removal[v] = sep[v] + (is_root[v] ? 0 : 1);
        }
    }
};

}  // namespace

BiconnectedComponents biconnected_components(const Graph& g) {
    LowpointSearch search(g, std::vector<char>(g.vertex_count(), 0), true);
    BiconnectedComponents out;
    out.components = std::move(search.blocks);
    for (auto& b : out.components) std::sort(b.begin(), b.end());
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (int v = 0; v < g.vertex_count(); ++v)
        if (search.after_removal[v] >= 2) out.cut_vertices.push_back(v);
    return out;
}

std::optional<std::vector<int>> find_cut(const Graph& g, int i, int j) {
    const int n = g.vertex_count();
    if (!((i == 2 && j == 2) || (i == 3 && (j == 3 || j == 2))))
        throw Error(ErrorCode::InvalidInput, "unsupported cut type");
    if (n <= i) return std::nullopt;
    std::vector<char> removed(n, 0);
    if (i == 2) {
        for (int u = 0; u < n; ++u) {
            removed[u] = 1;
            LowpointSearch s(g, removed, false);
            for (int v = u + 1; v < n; ++v) {
                if (s.components - 1 + s.after_removal[v] >= j) return std::vector<int>{u, v};
            }
            removed[u] = 0;
        }
        return std::nullopt;
    }
    for (int u = 0; u < n; ++u) {
        removed[u] = 1;
        for (int v = u + 1; v < n; ++v) {
            removed[v] = 1;
            LowpointSearch s(g, removed, false);
            for (int w = v + 1; w < n; ++w) {
                if (s.components - 1 + s.after_removal[w] >= j) return std::vector<int>{u, v, w};
            }
            removed[v] = 0;
        }
        removed[u] = 0;
    }
    return std::nullopt;
}

ContractedGraph contract_vertex_set(const Graph& g, const std::vector<int>& s_in) {
    if (s_in.empty()) throw Error(ErrorCode::InvalidInput, "empty contraction set");
    std::vector<int> s = s_in;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
        if (v < 0 || v >= g.vertex_count()) throw Error(ErrorCode::InvalidInput, "vertex out of range");
    if (!is_connected_set(g, s)) throw Error(ErrorCode::DisconnectedSet, "contraction set is not connected");

    const int n = g.vertex_count();
    std::vector<char> in(n, 0);
    for (int v : s) in[v] = 1;

    ContractedGraph out;
    out.merge_map.assign(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        if (in[v] && v != s.front()) continue;
        out.merge_map[v] = next++;
    }
    out.merged_vertex = out.merge_map[s.front()];
    for (int v : s) out.merge_map[v] = out.merged_vertex;
    out.graph = Graph(next);

    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        if (in[ed.u] && in[ed.v]) {
            out.internal_edges.push_back(e);
            continue;
        }
        const int a = out.merge_map[ed.u];
        const int b = out.merge_map[ed.v];
        const int folded = in[ed.u] ? ed.u : (in[ed.v] ? ed.v : -1);
        int ce;
        if (auto found = out.graph.find_edge(a, b)) {
            ce = *found;
        } else {
            ce = out.graph.add_edge(a, b);
            out.origins.emplace_back();
        }
        out.origins[ce].push_back({e, folded});
    }
    return out;
}

}  // namespace ising
