#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ising/model.hpp"
#include "ising/planarity.hpp"

namespace ising {

// Fisher expansion of a planar zero-field model together with its
// Kasteleyn orientation. Vertex gadgets: degree 1 is a single port, degree 2
// two ports joined by an edge, degree d >= 3 a chain of d - 2 triangles with
// the ports in rotation order. Each original edge e = (u, v) becomes the path
// port(u) - a_e - b_e - port(v), whose middle edge carries tanh(J_e).
// Perfect matchings correspond one-to-one with even subgraphs of the input:
// e is in the subgraph exactly when a_e - b_e is matched.
struct KasteleynSystem {
    Graph expanded_graph;
    PlanarEmbedding embedding;      // embedding of expanded_graph
    std::vector<char> orientation;  // per expanded edge: 1 means edge.u -> edge.v; empty until oriented
    std::vector<double> edge_weights;
    double log_prefactor = 0.0;      // N log 2 + sum log cosh J_e
    std::vector<int> edge_image;     // original edge -> expanded a_e - b_e edge
    std::vector<char> gadget_internal;  // expanded edge carries weight exactly 1
    int original_vertices = 0;
    std::vector<int> reference_matching;  // matching of the empty even subgraph
    std::vector<int> outer_faces;         // one excluded face per component
    int reference_sign = 0;               // sign of the Pfaffian term of the empty even subgraph
};

// Builds the expansion and its weights. Throws NotZeroField / NotPlanar.
KasteleynSystem fisher_expand(const IsingModel& m, const PlanarEmbedding& emb);

// Structure only (weights left at 1 on every edge, prefactor N log 2).
KasteleynSystem fisher_expand(const Graph& g, const PlanarEmbedding& emb);

// Orients the expanded graph so that every face but one per connected
// component has an odd number of darts agreeing with the orientation along
// the face traversal; also computes reference_sign.
void kasteleyn_orient(KasteleynSystem& sys);

// Replaces weights and prefactor for new interactions on the same graph.
void set_interactions(KasteleynSystem& sys, const std::vector<double>& j);

// Returns the indices of faces violating the parity condition, ignoring one
// face per component (the one chosen as outer face).
std::vector<int> kasteleyn_parity_violations(const KasteleynSystem& sys);

Eigen::MatrixXd kasteleyn_matrix(const KasteleynSystem& sys);

}  // namespace ising
