#pragma once

#include <variant>
#include <vector>

#include "ising/graph.hpp"

namespace ising {

// Directed traversal of an edge: forward means edge(e).u -> edge(e).v.
struct Dart {
    int edge;
    bool forward;

    int tail(const Graph& g) const { return forward ? g.edge(edge).u : g.edge(edge).v; }
    int head(const Graph& g) const { return forward ? g.edge(edge).v : g.edge(edge).u; }
};

struct PlanarEmbedding {
    std::vector<std::vector<int>> rotation;  // per vertex: incident edge ids in cyclic order
    std::vector<std::vector<Dart>> faces;    // every dart appears in exactly one face
};

struct NonplanarVerdict {
    std::vector<int> kuratowski_edges;  // edge ids of a K5 / K3,3 subdivision
};

using PlanarityResult = std::variant<PlanarEmbedding, NonplanarVerdict>;

PlanarityResult planarity_test(const Graph& g);
bool is_planar(const Graph& g);

// Face traversal: the dart after u->v is v->w where w follows u in the
// rotation at v.
std::vector<std::vector<Dart>> trace_faces(const Graph& g, const std::vector<std::vector<int>>& rotation);

// F as in V - E + F = 1 + C (the outer face of all components counted once).
int euler_face_count(const Graph& g, const PlanarEmbedding& emb);

}  // namespace ising
