#include "ising/k5free.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "ising/error.hpp"
#include "ising/planarity.hpp"

namespace ising {

namespace {

using Pair = std::pair<int, int>;

Pair ordered(int a, int b) { return a < b ? Pair{a, b} : Pair{b, a}; }

struct Attachment {
    int cut;                  // color-2 node id
    std::vector<int> set;     // its vertex set
};

struct Piece {
    std::vector<int> vertices;  // ascending host ids
    std::set<Pair> real;
    std::set<Pair> virt;
    std::vector<Attachment> attachments;

    int local(int v) const {
        return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
    }
    Graph graph() const {
        Graph g(static_cast<int>(vertices.size()));
        for (const auto& [u, v] : real) g.add_edge(local(u), local(v));
        for (const auto& [u, v] : virt) g.add_edge(local(u), local(v));
        return g;
    }
};

std::string format_set(const std::vector<int>& s) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
    out << '}';
    return out.str();
}

// Accumulates color-1 and color-2 nodes; supports rollback for the fallback search.
class Registry {
public:
    int add_cut(const std::vector<int>& set) {
        BlockTreeNode node;
        node.id = static_cast<int>(nodes_.size());
        node.color = 2;
        node.vertices = set;
        nodes_.push_back(std::move(node));
        return nodes_.back().id;
    }

    int add_piece(const Piece& p) {
        BlockTreeNode node;
        node.id = static_cast<int>(nodes_.size());
        node.color = 1;
        node.vertices = p.vertices;
        node.edges.assign(p.real.begin(), p.real.end());
        node.virtual_edges.assign(p.virt.begin(), p.virt.end());
        nodes_.push_back(std::move(node));
        for (const auto& a : p.attachments) edges_.push_back({a.cut, nodes_.back().id});
        return nodes_.back().id;
    }

    std::pair<std::size_t, std::size_t> mark() const { return {nodes_.size(), edges_.size()}; }
    void rollback(std::pair<std::size_t, std::size_t> m) {
        nodes_.resize(m.first);
        edges_.resize(m.second);
    }

    BlockTree take(BlockTreeKind kind) {
        BlockTree t;
        t.kind = kind;
        t.nodes = std::move(nodes_);
        t.tree_edges = std::move(edges_);
        return t;
    }

private:
    std::vector<BlockTreeNode> nodes_;
    std::vector<Pair> edges_;
};

// Splits `p` along the host vertex set `s`. Pairs inside `s` become virtual
// edges where missing; real edges inside `s` stay with the first piece.
std::vector<Piece> split(const Piece& p, const std::vector<int>& s, int cut) {
    const Graph g = p.graph();
    std::vector<char> removed(p.vertices.size(), 0);
    for (int v : s) removed[p.local(v)] = 1;
    const auto comps = connected_components(g, removed);
    std::vector<int> comp_of(p.vertices.size(), -1);
    std::vector<Piece> out(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
        for (int v : comps[i]) {
            comp_of[v] = static_cast<int>(i);
            out[i].vertices.push_back(p.vertices[v]);
        }
        out[i].vertices.insert(out[i].vertices.end(), s.begin(), s.end());
        std::sort(out[i].vertices.begin(), out[i].vertices.end());
    }
    auto target = [&](const std::vector<int>& vs) {
        for (int v : vs)
            if (!removed[p.local(v)]) return comp_of[p.local(v)];
        return 0;
    };
    for (const auto& e : p.real) out[target({e.first, e.second})].real.insert(e);
    for (const auto& e : p.virt) out[target({e.first, e.second})].virt.insert(e);
    for (const auto& a : p.attachments) out[target(a.set)].attachments.push_back(a);
    for (auto& piece : out) {
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t k = i + 1; k < s.size(); ++k) {
                const Pair e = ordered(s[i], s[k]);
                if (!piece.real.count(e) && !piece.virt.count(e)) piece.virt.insert(e);
            }
        piece.attachments.push_back({cut, s});
    }
    return out;
}

std::vector<int> to_host(const Piece& p, const std::vector<int>& local) {
    std::vector<int> out;
    for (int v : local) out.push_back(p.vertices[v]);
    return out;
}

Piece whole_graph_piece(const Graph& g) {
    Piece p;
    for (int v = 0; v < g.vertex_count(); ++v) p.vertices.push_back(v);
    for (const auto& e : g.edges()) p.real.insert(ordered(e.u, e.v));
    return p;
}

BlockTree block_tree(const Graph& g, BlockTreeKind kind, int cut_size, int keep_size) {
    Registry reg;
    std::vector<Piece> stack{whole_graph_piece(g)};
    while (!stack.empty()) {
        Piece p = std::move(stack.back());
        stack.pop_back();
        std::optional<std::vector<int>> cut;
        if (static_cast<int>(p.vertices.size()) > keep_size) cut = find_cut(p.graph(), cut_size, cut_size);
        if (!cut) {
            reg.add_piece(p);
            continue;
        }
        const auto s = to_host(p, *cut);
        const int id = reg.add_cut(s);
        for (auto& q : split(p, s, id)) stack.push_back(std::move(q));
    }
    return reg.take(kind);
}

bool is_biconnected(const Graph& g) {
    if (g.vertex_count() < 2 || !is_connected(g)) return false;
    return biconnected_components(g).cut_vertices.empty();
}

// --- K5 minor search -----------------------------------------------------------

class MinorSearch {
public:
    explicit MinorSearch(const Graph& g) {
        const int n = g.vertex_count();
        if (n > 64) throw Error(ErrorCode::TooLarge, "K5-minor search supports at most 64 vertices");
        adjacency_.assign(n, 0);
        for (const auto& e : g.edges()) {
            adjacency_[e.u] |= std::uint64_t{1} << e.v;
            adjacency_[e.v] |= std::uint64_t{1} << e.u;
        }
    }

    // Connected vertex set given as a bitmask.
    bool search(std::uint64_t component) {
        std::vector<std::uint64_t> sets;
        for (int v = 0; v < 64; ++v)
            if ((component >> v) & 1) sets.push_back(std::uint64_t{1} << v);
        return recurse(std::move(sets));
    }

private:
    std::uint64_t neighbours(std::uint64_t set) const {
        std::uint64_t out = 0;
        for (int v = 0; v < 64; ++v)
            if ((set >> v) & 1) out |= adjacency_[v];
        return out & ~set;
    }

    bool has_k5_subgraph(const std::vector<std::vector<char>>& adj, std::vector<int>& chosen, int start) const {
        if (chosen.size() == 5) return true;
        const int n = static_cast<int>(adj.size());
        for (int v = start; v < n; ++v) {
            bool ok = true;
            for (int c : chosen) ok = ok && adj[c][v];
            if (!ok) continue;
            chosen.push_back(v);
            if (has_k5_subgraph(adj, chosen, v + 1)) return true;
            chosen.pop_back();
        }
        return false;
    }

    bool recurse(std::vector<std::uint64_t> sets) {
        // suppress branch sets of degree <= 2 (never needed as K5 branch sets on their own)
        while (true) {
            const int n = static_cast<int>(sets.size());
            if (n < 5) return false;
            bool changed = false;
            for (int i = 0; i < n && !changed; ++i) {
                const std::uint64_t nb = neighbours(sets[i]);
                std::vector<int> adj;
                for (int k = 0; k < n; ++k)
                    if (k != i && (nb & sets[k])) adj.push_back(k);
                if (adj.size() <= 2) {
                    if (adj.empty()) {
                        sets.erase(sets.begin() + i);
                    } else {
                        sets[adj[0]] |= sets[i];
                        sets.erase(sets.begin() + i);
                    }
                    changed = true;
                }
            }
            if (!changed) break;
        }
        std::sort(sets.begin(), sets.end());
        if (!memo_.insert(sets).second) return false;
        const int n = static_cast<int>(sets.size());
        std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
        int edges = 0;
        for (int i = 0; i < n; ++i) {
            const std::uint64_t nb = neighbours(sets[i]);
            for (int k = i + 1; k < n; ++k)
                if (nb & sets[k]) {
                    adj[i][k] = adj[k][i] = 1;
                    ++edges;
                }
        }
        std::vector<int> chosen;
        if (has_k5_subgraph(adj, chosen, 0)) return true;
        if (n == 5 || edges < 10) return false;
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k) {
                if (!adj[i][k]) continue;
                std::vector<std::uint64_t> next;
                next.reserve(n - 1);
                for (int r = 0; r < n; ++r)
                    if (r != i && r != k) next.push_back(sets[r]);
                next.push_back(sets[i] | sets[k]);
                if (recurse(std::move(next))) return true;
            }
        return false;
    }

    std::vector<std::uint64_t> adjacency_;
    std::set<std::vector<std::uint64_t>> memo_;
};

// --- pipeline -------------------------------------------------------------------

constexpr int kSmallPiece = 8;
constexpr int kFallbackBudget = 20000;

class Pipeline {
public:
    explicit Pipeline(const K5FreeOptions& options) : options_(options) {}

    void process(const Piece& p) {
        const Graph g = p.graph();
        const int n = g.vertex_count();
        if (is_planar(g)) {
            reg_.add_piece(p);
            return;
        }
        if (!is_connected(g)) {
            split_and_process(p, {});
            return;
        }
        const auto bic = biconnected_components(g);
        if (!bic.cut_vertices.empty()) {
            split_and_process(p, to_host(p, {bic.cut_vertices.front()}));
            return;
        }
        if (auto cut = find_cut(g, 2, 2)) {
            split_and_process(p, to_host(p, *cut));
            return;
        }
        if (n <= kSmallPiece) {
            if (has_k5_minor(g))
                throw Error(ErrorCode::NotK5Free, "piece " + format_set(p.vertices) + " contains a K5 minor");
            reg_.add_piece(p);
            return;
        }
        if (auto cut = find_cut(g, 3, 3)) {
            split_and_process(p, to_host(p, *cut));
            return;
        }
        fallback(p, g);
    }

    BlockTree take() { return reg_.take(BlockTreeKind::ThreeThreeBlock); }

private:
    void split_and_process(const Piece& p, const std::vector<int>& s) {
        const int id = reg_.add_cut(s);
        for (const auto& q : split(p, s, id)) process(q);
    }

    // A 3-connected nonplanar piece above the size bound without (3,3)-cuts:
    // try 3-cuts leaving two components, in lexicographic order.
    void fallback(const Piece& p, const Graph& g) {
        const int n = g.vertex_count();
        if (options_.log) options_.log("trying (3,2)-cuts on piece " + format_set(p.vertices));
        std::vector<char> removed(n, 0);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c) {
                    removed[a] = removed[b] = removed[c] = 1;
                    const bool separates = count_components(g, removed) >= 2;
                    removed[a] = removed[b] = removed[c] = 0;
                    if (!separates) continue;
                    if (++attempts_ > kFallbackBudget)
                        throw Error(ErrorCode::NotK5Free, "fallback search budget exhausted on piece " +
                                                              format_set(p.vertices));
                    const auto s = to_host(p, {a, b, c});
                    const auto mark = reg_.mark();
                    try {
                        split_and_process(p, s);
                        if (options_.log)
                            options_.log("(3,2)-cut fallback split piece " + format_set(p.vertices) + " on " +
                                         format_set(s));
                        return;
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::NotK5Free) throw;
                        reg_.rollback(mark);
                    }
                }
        throw Error(ErrorCode::NotK5Free, "nonplanar piece " + format_set(p.vertices) + " with " + std::to_string(n) +
                                              " > 8 vertices admits no admissible split");
    }

    const K5FreeOptions& options_;
    Registry reg_;
    int attempts_ = 0;
};

}  // namespace

BlockTree two_block_tree(const Graph& g) {
    if (!is_biconnected(g)) throw Error(ErrorCode::NotBiconnected, "two-block tree needs a biconnected graph");
    return block_tree(g, BlockTreeKind::TwoBlock, 2, 0);
}

BlockTree three_three_block_tree(const Graph& g, int keep_size) {
    const int n = g.vertex_count();
    const bool complete = g.edge_count() == n * (n - 1) / 2;
    if (!is_biconnected(g) || (n < 4 && !complete) || find_cut(g, 2, 2))
        throw Error(ErrorCode::Not3Connected, "(3,3)-block tree needs a 3-connected graph");
    return block_tree(g, BlockTreeKind::ThreeThreeBlock, 3, keep_size);
}

bool has_k5_minor(const Graph& g) {
    MinorSearch search(g);
    for (const auto& comp : connected_components(g)) {
        if (comp.size() < 5) continue;
        std::uint64_t mask = 0;
        for (int v : comp) mask |= std::uint64_t{1} << v;
        if (search.search(mask)) return true;
    }
    return false;
}

DecompositionTree decompose_k5_free(const Graph& g, const K5FreeOptions& options) {
    Pipeline pipeline(options);
    pipeline.process(whole_graph_piece(g));
    const BlockTree bt = pipeline.take();

    // contract every color-2 node into its smallest-id neighbour
    std::vector<std::vector<int>> cut_neighbours(bt.nodes.size());
    for (const auto& [cut, piece] : bt.tree_edges) cut_neighbours[cut].push_back(piece);
    std::map<int, int> bag_of;  // color-1 node id -> bag index
    for (const auto& node : bt.nodes)
        if (node.color == 1) bag_of.emplace(node.id, static_cast<int>(bag_of.size()));
    const int bags = static_cast<int>(bag_of.size());
    std::vector<std::vector<int>> adj(bags);
    for (auto& nb : cut_neighbours) {
        if (nb.empty()) continue;
        std::sort(nb.begin(), nb.end());
        const int rep = bag_of.at(nb.front());
        for (std::size_t i = 1; i < nb.size(); ++i) {
            const int other = bag_of.at(nb[i]);
            adj[rep].push_back(other);
            adj[other].push_back(rep);
        }
    }

    DecompositionTree tree;
    tree.c = kSmallPiece;
    tree.root = 0;
    tree.nodes.resize(bags);
    for (const auto& [id, bag] : bag_of) {
        tree.nodes[bag].id = bag;
        tree.nodes[bag].vertices = bt.nodes[id].vertices;
    }
    std::vector<char> seen(bags, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        for (int u : adj[t])
            if (!seen[u]) {
                seen[u] = 1;
                tree.nodes[u].parent = t;
                stack.push_back(u);
            }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw Error(ErrorCode::InternalError, "block pieces do not form a tree");
    tree = normalize_ownership(tree, g);
    const auto report = validate(tree, g);
    if (!report.ok()) throw Error(ErrorCode::InternalError, "decomposition failed validation: " + report.summary());
    return tree;
}

}  // namespace ising
