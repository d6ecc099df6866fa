#include <gtest/gtest.h>

#include <cmath>

#include "ising/brute_force.hpp"
#include "ising/error.hpp"
#include "ising/grid.hpp"
#include "ising/planar_ising.hpp"

using namespace ising;

TEST(GridGraph, CountsAndRasterOrder) {
    const Graph g = grid_graph(15);
    EXPECT_EQ(g.vertex_count(), 225);
    EXPECT_EQ(g.edge_count(), 420);
    const Graph s = grid_graph(3);
    EXPECT_EQ(s.edge(0).u, 0);
    EXPECT_EQ(s.edge(0).v, 1);
    EXPECT_EQ(s.edge(1).u, 0);
    EXPECT_EQ(s.edge(1).v, 3);
    EXPECT_EQ(s.edge(2).u, 1);
    EXPECT_EQ(s.edge(2).v, 2);
}

TEST(GridModel, RejectsWrongSizes) {
    EXPECT_THROW(GridModel(3, std::vector<double>(8), std::vector<double>(12)), Error);
    EXPECT_THROW(GridModel(3, std::vector<double>(9), std::vector<double>(11)), Error);
}

TEST(Apexify, HalvesThePartitionFunction) {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const GridModel m = random_grid_model(2, 1.5, rng);
        const ApexModel a = apexify(m);
        const double grid = brute_force_log_z(m.ising_model());
        const double apex = brute_force_log_z(IsingModel(a.graph, a.interactions));
        EXPECT_NEAR(grid, apex - std::log(2.0), 1e-10);
    }
}

TEST(Apexify, ZeroFieldGivesZeroApexCouplings) {
    Rng rng(2);
    GridModel m = random_grid_model(4, 2.0, rng);
    std::fill(m.fields.begin(), m.fields.end(), 0.0);
    const ApexModel a = apexify(m);
    for (int v = 0; v < 16; ++v) EXPECT_EQ(a.interactions[a.apex_edge(v)], 0.0);
    EXPECT_EQ(a.graph.edge(a.apex_edge(5)).u, 5);
    EXPECT_EQ(a.graph.edge(a.apex_edge(5)).v, a.apex);
}

TEST(Apexify, CountsAtFifteen) {
    Rng rng(3);
    const ApexModel a = apexify(random_grid_model(15, 1.0, rng));
    EXPECT_EQ(a.graph.vertex_count(), 226);
    EXPECT_EQ(a.graph.edge_count(), 645);
}

TEST(TransferMatrix, MatchesBruteForce) {
    Rng rng(5);
    for (int h : {1, 2, 3, 4}) {
        for (int trial = 0; trial < 5; ++trial) {
            const GridModel m = random_grid_model(h, 2.0, rng);
            const GridExact ex = transfer_matrix_exact(m);
            const IsingModel im = m.ising_model();
            EXPECT_NEAR(ex.log_z, brute_force_log_z(im), 1e-10);
            const Marginals bm = brute_force_marginals(im);
            for (std::size_t e = 0; e < bm.edge.size(); ++e) EXPECT_NEAR(ex.edge_expectations[e], bm.edge[e], 1e-9);
            for (std::size_t v = 0; v < bm.vertex.size(); ++v)
                EXPECT_NEAR(ex.vertex_expectations[v], bm.vertex[v], 1e-9);
        }
    }
}

TEST(TransferMatrix, LogZOnlySkipsMarginals) {
    Rng rng(6);
    const GridModel m = random_grid_model(5, 1.0, rng);
    const GridExact ex = transfer_matrix_exact(m, false);
    EXPECT_TRUE(ex.edge_expectations.empty());
    EXPECT_NEAR(ex.log_z, transfer_matrix_exact(m).log_z, 1e-12);
}

TEST(TransferMatrix, AgreesWithPlanarEngineAtFifteen) {
    Rng rng(7);
    GridModel m = random_grid_model(15, 1.0, rng);
    std::fill(m.fields.begin(), m.fields.end(), 0.0);
    const GridExact ex = transfer_matrix_exact(m, false);
    const double planar = log_z_planar(IsingModel(m.graph(), m.interactions));
    EXPECT_NEAR(planar, ex.log_z, 1e-6 * std::abs(ex.log_z));
}

TEST(TransferMatrix, TooLarge) {
    GridModel m(21, std::vector<double>(441), std::vector<double>(2 * 21 * 20));
    try {
        transfer_matrix_exact(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLarge);
    }
}
