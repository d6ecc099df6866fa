#include "ising/planarity.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "ising/error.hpp"

namespace ising {

namespace {

using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                         boost::property<boost::edge_index_t, int>>;
using BoostEdge = boost::graph_traits<BoostGraph>::edge_descriptor;

BoostGraph to_boost(const Graph& g) {
    BoostGraph bg(g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) boost::add_edge(g.edge(e).u, g.edge(e).v, e, bg);
    return bg;
}

}  // namespace

std::vector<std::vector<Dart>> trace_faces(const Graph& g, const std::vector<std::vector<int>>& rotation) {
    const int m = g.edge_count();
    // position of edge e in the rotation of its u (slot 0) and v (slot 1) endpoint
    std::vector<int> pos(2 * m, -1);
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& rot = rotation[v];
        for (std::size_t i = 0; i < rot.size(); ++i) {
            const int e = rot[i];
            pos[2 * e + (g.edge(e).u == v ? 0 : 1)] = static_cast<int>(i);
        }
    }
    for (int s = 0; s < 2 * m; ++s)
        if (pos[s] < 0) throw Error(ErrorCode::InternalError, "rotation system misses an edge end");

    std::vector<char> used(2 * m, 0);
    std::vector<std::vector<Dart>> faces;
    for (int start = 0; start < 2 * m; ++start) {
        if (used[start]) continue;
        faces.emplace_back();
        auto& face = faces.back();
        int d = start;
        while (!used[d]) {
            used[d] = 1;
            const int e = d / 2;
            const bool forward = (d % 2) == 0;
            face.push_back({e, forward});
            const int head = forward ? g.edge(e).v : g.edge(e).u;
            const auto& rot = rotation[head];
            const int at = pos[2 * e + (g.edge(e).u == head ? 0 : 1)];
            const int next_edge = rot[(at + 1) % rot.size()];
            const bool next_forward = g.edge(next_edge).u == head;
            d = 2 * next_edge + (next_forward ? 0 : 1);
        }
        if (d != start) throw Error(ErrorCode::InternalError, "face traversal did not close");
    }
    return faces;
}

PlanarityResult planarity_test(const Graph& g) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    BoostGraph bg = to_boost(g);
    std::vector<std::vector<BoostEdge>> storage(n);
    auto embedding = boost::make_iterator_property_map(storage.begin(), boost::get(boost::vertex_index, bg));
    std::vector<BoostEdge> kuratowski;
    const bool planar = boost::boyer_myrvold_planarity_test(
        boost::boyer_myrvold_params::graph = bg, boost::boyer_myrvold_params::embedding = embedding,
        boost::boyer_myrvold_params::kuratowski_subgraph = std::back_inserter(kuratowski));
    if (!planar) {
        NonplanarVerdict verdict;
        for (const auto& e : kuratowski) verdict.kuratowski_edges.push_back(boost::get(boost::edge_index, bg, e));
        return verdict;
    }
    PlanarEmbedding emb;
    emb.rotation.resize(n);
    for (int v = 0; v < n; ++v) {
        for (const auto& e : storage[v]) emb.rotation[v].push_back(boost::get(boost::edge_index, bg, e));
        if (static_cast<int>(emb.rotation[v].size()) != g.degree(v))
            throw Error(ErrorCode::InternalError, "embedding rotation has wrong degree");
    }
    emb.faces = trace_faces(g, emb.rotation);
    const int f = euler_face_count(g, emb);
    const int c = static_cast<int>(connected_components(g).size());
    if (n - m + f != 1 + c) throw Error(ErrorCode::InternalError, "embedding violates the Euler relation");
    return emb;
}

bool is_planar(const Graph& g) {
    const int n = g.vertex_count();
    if (n >= 3 && g.edge_count() > 3 * n - 6) return false;
    BoostGraph bg = to_boost(g);
    return boost::boyer_myrvold_planarity_test(bg);
}

int euler_face_count(const Graph& g, const PlanarEmbedding& emb) {
    int with_edges = 0;
    for (const auto& comp : connected_components(g)) {
        bool has = false;
        for (int v : comp) has = has || g.degree(v) > 0;
        with_edges += has ? 1 : 0;
    }
    return static_cast<int>(emb.faces.size()) - with_edges + 1;
}

}  // namespace ising
