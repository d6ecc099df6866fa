#include "ising/kasteleyn.hpp"

#include <cmath>
#include <deque>
#include <variant>

#include "ising/error.hpp"

namespace ising {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

struct Builder {
    Graph g;
    std::vector<char> internal;
    std::vector<std::pair<int, int>> reference;  // edges of the empty-subgraph matching

    int node() { return g.add_vertex(); }
    int link(int a, int b, bool unit_weight = true) {
        const int e = g.add_edge(a, b);
        internal.push_back(unit_weight ? 1 : 0);
        return e;
    }
};

}  // namespace

KasteleynSystem fisher_expand(const Graph& graph, const PlanarEmbedding& emb) {
    const int n = graph.vertex_count();
    if (static_cast<int>(emb.rotation.size()) != n)
        throw Error(ErrorCode::InvalidInput, "embedding does not match the graph");

    Builder b;
    // port[v][i]: port node for the i-th edge in the rotation of v
    std::vector<std::vector<int>> port(n);
    for (int v = 0; v < n; ++v) {
        const int d = static_cast<int>(emb.rotation[v].size());
        if (d != graph.degree(v)) throw Error(ErrorCode::InvalidInput, "rotation degree mismatch");
        for (int i = 0; i < d; ++i) port[v].push_back(b.node());
        if (d == 2) {
            b.link(port[v][0], port[v][1]);
        } else if (d >= 3) {
            // chain of d - 2 triangles; `out` is the link node leaving the previous triangle
            if (d == 3) {
                b.link(port[v][0], port[v][1]);
                b.link(port[v][1], port[v][2]);
                b.link(port[v][0], port[v][2]);
            } else {
                int out = b.node();
                b.link(port[v][0], port[v][1]);
                b.link(port[v][1], out);
                b.link(port[v][0], out);
                for (int k = 2; k <= d - 3; ++k) {
                    const int in = b.node();
                    b.link(out, in);
                    b.reference.push_back({out, in});
                    const int next_out = b.node();
                    b.link(in, port[v][k]);
                    b.link(port[v][k], next_out);
                    b.link(in, next_out);
                    out = next_out;
                }
                const int in = b.node();
                b.link(out, in);
                b.reference.push_back({out, in});
                b.link(in, port[v][d - 2]);
                b.link(port[v][d - 2], port[v][d - 1]);
                b.link(in, port[v][d - 1]);
            }
        }
    }

    // position of each edge in the rotation of its endpoints
    std::vector<int> at_u(graph.edge_count(), -1), at_v(graph.edge_count(), -1);
    for (int v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < emb.rotation[v].size(); ++i) {
            const int e = emb.rotation[v][i];
            if (graph.edge(e).u == v)
                at_u[e] = static_cast<int>(i);
            else
                at_v[e] = static_cast<int>(i);
        }
    }

    KasteleynSystem sys;
    sys.edge_image.resize(graph.edge_count());
    for (int e = 0; e < graph.edge_count(); ++e) {
        if (at_u[e] < 0 || at_v[e] < 0) throw Error(ErrorCode::InvalidInput, "rotation misses an edge");
        const int pu = port[graph.edge(e).u][at_u[e]];
        const int pv = port[graph.edge(e).v][at_v[e]];
        const int a = b.node();
        const int c = b.node();
        b.link(pu, a);
        sys.edge_image[e] = b.link(a, c, false);
        b.link(c, pv);
        b.reference.push_back({pu, a});
        b.reference.push_back({c, pv});
    }

    sys.expanded_graph = std::move(b.g);
    sys.gadget_internal = std::move(b.internal);
    sys.original_vertices = n;
    sys.edge_weights.assign(sys.expanded_graph.edge_count(), 1.0);
    sys.log_prefactor = n * kLog2;

    auto planar = planarity_test(sys.expanded_graph);
    if (!std::holds_alternative<PlanarEmbedding>(planar))
        throw Error(ErrorCode::NotPlanar, "Fisher expansion is not planar; the rotation system is invalid");
    sys.embedding = std::get<PlanarEmbedding>(std::move(planar));

    for (const auto& [p, q] : b.reference) sys.reference_matching.push_back(*sys.expanded_graph.find_edge(p, q));
    return sys;
}

KasteleynSystem fisher_expand(const IsingModel& m, const PlanarEmbedding& emb) {
    if (!m.zero_field()) throw Error(ErrorCode::NotZeroField, "Fisher expansion needs a zero-field model");
    KasteleynSystem sys = fisher_expand(m.graph, emb);
    set_interactions(sys, m.interactions);
    return sys;
}

void set_interactions(KasteleynSystem& sys, const std::vector<double>& j) {
    if (j.size() != sys.edge_image.size())
        throw Error(ErrorCode::InvalidInput, "interaction count does not match the expanded model");
    double log_cosh = 0.0;
    for (std::size_t e = 0; e < j.size(); ++e) {
        const double a = std::abs(j[e]);
        // log cosh a = a + log1p(exp(-2a)) - log 2, stable for large a
        log_cosh += a + std::log1p(std::exp(-2.0 * a)) - kLog2;
        sys.edge_weights[sys.edge_image[e]] = std::tanh(j[e]);
    }
    sys.log_prefactor = sys.original_vertices * kLog2 + log_cosh;
}

namespace {

int permutation_sign(const std::vector<int>& perm) {
    std::vector<char> seen(perm.size(), 0);
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
            seen[j] = 1;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

}  // namespace

void kasteleyn_orient(KasteleynSystem& sys) {
    const Graph& g = sys.expanded_graph;
    const int n = g.vertex_count();
    const int m = g.edge_count();
    sys.orientation.assign(m, 0);
    std::vector<char> oriented(m, 0);

    // spanning forest by BFS, tree edges oriented u -> v
    std::vector<int> comp(n, -1);
    int components = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::deque<int> queue{s};
        comp[s] = components;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (const auto& inc : g.incident(v)) {
                if (comp[inc.neighbor] >= 0) continue;
                comp[inc.neighbor] = components;
                oriented[inc.edge] = 1;
                sys.orientation[inc.edge] = 1;
                queue.push_back(inc.neighbor);
            }
        }
        ++components;
    }

    const auto& faces = sys.embedding.faces;
    const int f_count = static_cast<int>(faces.size());
    std::vector<int> face_of(2 * m, -1);
    for (int f = 0; f < f_count; ++f)
        for (const auto& d : faces[f]) face_of[2 * d.edge + (d.forward ? 0 : 1)] = f;

    // one excluded face per component: the face holding the smallest dart
    std::vector<char> excluded(f_count, 0);
    std::vector<char> comp_done(components, 0);
    sys.outer_faces.clear();
    for (int d = 0; d < 2 * m; ++d) {
        const int c = comp[g.edge(d / 2).u];
        if (comp_done[c]) continue;
        comp_done[c] = 1;
        excluded[face_of[d]] = 1;
        sys.outer_faces.push_back(face_of[d]);
    }

    std::vector<int> open(f_count, 0);
    for (int e = 0; e < m; ++e) {
        if (oriented[e]) continue;
        const int f1 = face_of[2 * e];
        const int f2 = face_of[2 * e + 1];
        if (f1 == f2) throw Error(ErrorCode::InternalError, "non-tree edge bounds a single face");
        ++open[f1];
        ++open[f2];
    }
    std::deque<int> ready;
    for (int f = 0; f < f_count; ++f)
        if (!excluded[f] && open[f] == 1) ready.push_back(f);
    while (!ready.empty()) {
        const int f = ready.front();
        ready.pop_front();
        if (open[f] != 1) continue;
        int agree = 0;
        const Dart* free_dart = nullptr;
        for (const auto& d : faces[f]) {
            if (!oriented[d.edge]) {
                free_dart = &d;
                continue;
            }
            if ((sys.orientation[d.edge] == 1) == d.forward) ++agree;
        }
        // make the free dart agree iff the count so far is even
        const bool want_agree = (agree % 2) == 0;
        const int e = free_dart->edge;
        sys.orientation[e] = (want_agree == free_dart->forward) ? 1 : 0;
        oriented[e] = 1;
        for (int side = 0; side < 2; ++side) {
            const int h = face_of[2 * e + side];
            --open[h];
            if (h != f && !excluded[h] && open[h] == 1) ready.push_back(h);
        }
    }
    for (int e = 0; e < m; ++e)
        if (!oriented[e]) throw Error(ErrorCode::InternalError, "Kasteleyn orientation left an edge unoriented");
    if (!kasteleyn_parity_violations(sys).empty())
        throw Error(ErrorCode::InternalError, "Kasteleyn orientation violates face parity");

    // sign of the reference term: sgn(pairing permutation) * prod of orientation signs
    std::vector<int> perm;
    perm.reserve(n);
    int sign = 1;
    for (int e : sys.reference_matching) {
        perm.push_back(g.edge(e).u);
        perm.push_back(g.edge(e).v);
        if (!sys.orientation[e]) sign = -sign;
    }
    if (static_cast<int>(perm.size()) != n) throw Error(ErrorCode::InternalError, "reference matching size");
    sys.reference_sign = sign * permutation_sign(perm);
}

std::vector<int> kasteleyn_parity_violations(const KasteleynSystem& sys) {
    std::vector<char> outer(sys.embedding.faces.size(), 0);
    for (int f : sys.outer_faces) outer[f] = 1;
    std::vector<int> bad;
    for (std::size_t f = 0; f < sys.embedding.faces.size(); ++f) {
        if (outer[f]) continue;
        int agree = 0;
        for (const auto& d : sys.embedding.faces[f])
            if ((sys.orientation[d.edge] == 1) == d.forward) ++agree;
        if (agree % 2 == 0) bad.push_back(static_cast<int>(f));
    }
    return bad;
}

Eigen::MatrixXd kasteleyn_matrix(const KasteleynSystem& sys) {
    const Graph& g = sys.expanded_graph;
    if (static_cast<int>(sys.orientation.size()) != g.edge_count())
        throw Error(ErrorCode::InternalError, "Kasteleyn system is not oriented");
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const double w = sys.orientation[e] ? sys.edge_weights[e] : -sys.edge_weights[e];
        k(g.edge(e).u, g.edge(e).v) = w;
        k(g.edge(e).v, g.edge(e).u) = -w;
    }
    return k;
}

}  // namespace ising
