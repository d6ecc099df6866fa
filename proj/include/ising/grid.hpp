#pragma once

#include <vector>

#include "ising/graph.hpp"
#include "ising/model.hpp"
#include "ising/rng.hpp"

namespace ising {

// H x H square lattice: vertex (i, j) has id i * H + j; edges are listed in
// raster order, the right edge of a site before its down edge.
Graph grid_graph(int h);

struct GridModel {
    int h = 0;
    std::vector<double> fields;        // per vertex
    std::vector<double> interactions;  // per grid edge

    GridModel() = default;
    GridModel(int h, std::vector<double> fields, std::vector<double> interactions);

    Graph graph() const { return grid_graph(h); }
    IsingModel ising_model() const;
    int vertex(int i, int j) const { return i * h + j; }
};

// Fields mu ~ U(-0.5, 0.5), interactions J ~ U(-alpha, alpha).
GridModel random_grid_model(int h, double alpha, Rng& rng);

// Grid plus an apex vertex (id H^2) joined to every site. Apex edge of
// vertex v has id |E_grid| + v and carries mu_v; grid edges keep their ids.
struct ApexModel {
    Graph graph;
    std::vector<double> interactions;
    int apex = 0;
    int grid_edge_count = 0;

    int apex_edge(int v) const { return grid_edge_count + v; }
};

ApexModel apexify(const GridModel& m);

struct GridExact {
    double log_z = 0.0;
    std::vector<double> edge_expectations;    // E[x_u x_v] per grid edge
    std::vector<double> vertex_expectations;  // E[x_v]
};

inline constexpr int kTransferMatrixLimit = 20;

// Site-by-site transfer matrix over 2^H boundary profiles in the log domain;
// marginals by a forward-backward pass with per-row checkpoints.
GridExact transfer_matrix_exact(const GridModel& m, bool with_marginals = true);

}  // namespace ising
