#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "glued.hpp"
#include "ising/brute_force.hpp"
#include "ising/error.hpp"
#include "ising/inference.hpp"
#include "ising/k5free.hpp"
#include "ising/planarity.hpp"

using namespace ising;
using namespace ising::testing;

namespace {

using Pair = std::pair<int, int>;

// Every real edge appears in exactly one color-1 node and color-2 nodes are
// contained in each of their neighbours.
void check_block_tree(const BlockTree& t, const Graph& g, std::size_t cut_size) {
    std::multiset<Pair> real;
    for (const auto& n : t.nodes) {
        if (n.color == 2) {
            EXPECT_EQ(n.vertices.size(), cut_size);
            EXPECT_TRUE(n.edges.empty());
        }
        for (const auto& e : n.edges) real.insert(e);
    }
    std::multiset<Pair> expected;
    for (const auto& e : g.edges()) expected.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    EXPECT_EQ(real, expected);
    for (const auto& [cut, piece] : t.tree_edges) {
        EXPECT_EQ(t.nodes[cut].color, 2);
        EXPECT_EQ(t.nodes[piece].color, 1);
        const auto& pv = t.nodes[piece].vertices;
        for (int v : t.nodes[cut].vertices) EXPECT_TRUE(std::binary_search(pv.begin(), pv.end(), v));
    }
    // a tree: nodes - 1 edges and connected
    EXPECT_EQ(t.tree_edges.size() + 1, t.nodes.size());
}

void check_reassembly(const DecompositionTree& tree, const Graph& g) {
    std::set<Pair> owned;
    for (const auto& n : tree.nodes)
        for (const auto& e : n.edges) EXPECT_TRUE(owned.insert(e).second);
    EXPECT_EQ(static_cast<int>(owned.size()), g.edge_count());
    std::set<int> covered;
    for (const auto& n : tree.nodes) covered.insert(n.vertices.begin(), n.vertices.end());
    EXPECT_EQ(static_cast<int>(covered.size()), g.vertex_count());
    EXPECT_TRUE(validate(tree, g).ok());
    for (const auto& n : tree.nodes) {
        if (n.vertices.size() <= 8) continue;
        Graph local(static_cast<int>(n.vertices.size()));
        for (const auto& [u, v] : n.edges) {
            const auto a = std::lower_bound(n.vertices.begin(), n.vertices.end(), u) - n.vertices.begin();
            const auto b = std::lower_bound(n.vertices.begin(), n.vertices.end(), v) - n.vertices.begin();
            local.add_edge(static_cast<int>(a), static_cast<int>(b));
        }
        EXPECT_TRUE(is_planar(local));
    }
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    Graph g = a;
    const int off = a.vertex_count();
    for (int v = 0; v < b.vertex_count(); ++v) g.add_vertex();
    for (const auto& e : b.edges()) g.add_edge(e.u + off, e.v + off);
    return g;
}

}  // namespace

TEST(TwoBlockTree, ThreeConnectedIsSingleNode) {
    auto t = two_block_tree(complete_graph(4));
    ASSERT_EQ(t.nodes.size(), 1u);
    EXPECT_EQ(t.nodes[0].color, 1);
    EXPECT_TRUE(t.nodes[0].virtual_edges.empty());
}

TEST(TwoBlockTree, SquaresSharingAnEdge) {
    GluedBuilder b;
    const int root = b.add_root(cycle_graph(4));
    b.attach(root, cycle_graph(4), {0, 1}, {0, 1});
    const Graph g = b.build().graph;
    auto t = two_block_tree(g);
    check_block_tree(t, g, 2);
    bool found = false;
    for (const auto& n : t.nodes)
        if (n.color == 2 && n.vertices == std::vector<int>{0, 1}) {
            found = true;
            int neighbours = 0;
            for (const auto& [cut, piece] : t.tree_edges) neighbours += cut == n.id;
            EXPECT_EQ(neighbours, 2);
        }
    EXPECT_TRUE(found);
    for (const auto& n : t.nodes)
        if (n.color == 1) EXPECT_EQ(n.vertices.size(), 3u);
}

TEST(TwoBlockTree, SixCycleEndsInTriangles) {
    const Graph g = cycle_graph(6);
    auto t = two_block_tree(g);
    check_block_tree(t, g, 2);
    int pieces = 0;
    for (const auto& n : t.nodes) {
        if (n.color != 1) continue;
        ++pieces;
        EXPECT_EQ(n.vertices.size(), 3u);
        EXPECT_EQ(n.edges.size() + n.virtual_edges.size(), 3u);
    }
    EXPECT_EQ(pieces, 4);
}

TEST(TwoBlockTree, RequiresBiconnected) {
    try {
        two_block_tree(path_graph(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotBiconnected);
    }
}

TEST(ThreeThreeBlockTree, SingleNodeCases) {
    for (const Graph& g : {complete_graph(4), mobius_ladder(4)}) {
        ASSERT_FALSE(find_cut(g, 3, 3).has_value());
        auto t = three_three_block_tree(g);
        EXPECT_EQ(t.nodes.size(), 1u);
    }
}

TEST(ThreeThreeBlockTree, ThreeBlocksOnATriple) {
    Graph g(3);
    for (int b = 0; b < 3; ++b) {
        const int base = g.vertex_count();
        for (int i = 0; i < 4; ++i) g.add_vertex();
        for (int i = 0; i < 4; ++i)
            for (int k = i + 1; k < 4; ++k) g.add_edge(base + i, base + k);
        g.add_edge(base, 0);
        g.add_edge(base + 1, 1);
        g.add_edge(base + 2, 2);
        g.add_edge(base + 3, 0);
    }
    auto t = three_three_block_tree(g);
    check_block_tree(t, g, 3);
    ASSERT_EQ(t.nodes.size(), 4u);
    const auto& cut = t.nodes[0];
    EXPECT_EQ(cut.color, 2);
    EXPECT_EQ(cut.vertices, (std::vector<int>{0, 1, 2}));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(t.nodes[i].virtual_edges.size(), 3u);
}

TEST(ThreeThreeBlockTree, RequiresThreeConnected) {
    try {
        three_three_block_tree(cycle_graph(5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Not3Connected);
    }
}

TEST(K5Minor, KnownGraphs) {
    EXPECT_TRUE(has_k5_minor(complete_graph(5)));
    EXPECT_TRUE(has_k5_minor(complete_graph(6)));
    EXPECT_FALSE(has_k5_minor(complete_bipartite(3, 3)));
    EXPECT_FALSE(has_k5_minor(mobius_ladder(4)));
    EXPECT_FALSE(has_k5_minor(rect_grid(4, 4)));
    // Petersen graph
    Graph p(10);
    for (int i = 0; i < 5; ++i) {
        p.add_edge(i, (i + 1) % 5);
        p.add_edge(i, i + 5);
        p.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    EXPECT_TRUE(has_k5_minor(p));
    EXPECT_TRUE(k5_minor_by_partitions(p));
}

TEST(K5Minor, AgreesWithPartitionOracle) {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 5 + trial % 5;
        const Graph g = random_graph(n, 0.45 + 0.1 * rng.uniform() * 4, rng);
        EXPECT_EQ(has_k5_minor(g), k5_minor_by_partitions(g)) << trial;
    }
}

TEST(DecomposeK5Free, RejectsK5) {
    try {
        decompose_k5_free(complete_graph(5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotK5Free);
    }
}

TEST(DecomposeK5Free, MoebiusLaddersAreSingleNodes) {
    for (int k : {3, 4}) {
        const Graph g = mobius_ladder(k);
        auto tree = decompose_k5_free(g);
        ASSERT_EQ(tree.nodes.size(), 1u);
        EXPECT_EQ(tree.nodes[0].vertices.size(), static_cast<std::size_t>(2 * k));
    }
}

TEST(DecomposeK5Free, PlanarGraphsGiveOnePlanarNode) {
    Rng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = random_planar_graph(12, rng, 0.7);
        auto tree = decompose_k5_free(g);
        check_reassembly(tree, g);
        IsingModel m = random_model(g, -1, 1, rng);
        EXPECT_NEAR(infer_log_z(tree, m), brute_force_log_z(m), 1e-9 * std::max(1.0, brute_force_log_z(m)));
    }
}

TEST(DecomposeK5Free, CliqueSumChain) {
    // triangulated square, V8 on an edge, K3,3 on an edge of V8, and a K4 on a triangle
    Graph tri_grid = rect_grid(2, 2);
    tri_grid.add_edge(0, 3);
    GluedBuilder b;
    const int root = b.add_root(tri_grid);
    const int v8 = b.attach(root, mobius_ladder(4), {0, 1}, {b.host(root, 0), b.host(root, 1)});
    b.attach(v8, complete_bipartite(3, 3), {0, 3}, {b.host(v8, 4), b.host(v8, 5)});
    b.attach(root, complete_graph(4), {0, 1, 2}, {b.host(root, 0), b.host(root, 1), b.host(root, 3)});
    const auto inst = b.build();
    ASSERT_LE(inst.graph.vertex_count(), 16);
    const Graph& g = inst.graph;
    auto tree = decompose_k5_free(g);
    check_reassembly(tree, g);
    Rng rng(33);
    IsingModel m = random_model(g, -1.5, 1.5, rng);
    const double exact = brute_force_log_z(m);
    EXPECT_NEAR(infer_log_z(tree, m), exact, 1e-9 * std::max(1.0, std::abs(exact)));
}

TEST(DecomposeK5Free, DisconnectedAndCutVertices) {
    Graph g = disjoint_union(mobius_ladder(4), complete_bipartite(3, 3));
    g.add_vertex();
    g.add_edge(0, g.vertex_count() - 1);
    auto tree = decompose_k5_free(g);
    check_reassembly(tree, g);
    Rng rng(34);
    IsingModel m = random_model(g, -1, 1, rng);
    EXPECT_NEAR(infer_log_z(tree, m), brute_force_log_z(m), 1e-9 * std::abs(brute_force_log_z(m)));
}

TEST(DecomposeK5Free, AgreesWithMinorOracleOnSmallGraphs) {
    Rng rng(35);
    int accepted = 0, rejected = 0;
    for (int trial = 0; trial < 250; ++trial) {
        const int n = 5 + trial % 5;
        const Graph g = random_graph(n, 0.3 + 0.5 * rng.uniform(), rng);
        const bool minor = k5_minor_by_partitions(g);
        bool accept = true;
        try {
            auto tree = decompose_k5_free(g);
            check_reassembly(tree, g);
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::NotK5Free) << e.what();
            accept = false;
        }
        EXPECT_EQ(accept, !minor) << trial;
        (accept ? accepted : rejected)++;
    }
    EXPECT_GT(accepted, 20);
    EXPECT_GT(rejected, 20);
}

TEST(DecomposeK5Free, FallbackIsLoggedAndRejectsK5) {
    // K5 linked through a matching to a triangle with an apex: 3-connected,
    // nine vertices, only 3-cuts leaving two components
    Graph g = complete_graph(5);
    for (int i = 0; i < 4; ++i) g.add_vertex();
    g.add_edge(5, 6);
    g.add_edge(6, 7);
    g.add_edge(5, 7);
    for (int i = 0; i < 3; ++i) {
        g.add_edge(i, 5 + i);
        g.add_edge(8, 5 + i);
    }
    ASSERT_FALSE(find_cut(g, 2, 2).has_value());
    ASSERT_FALSE(find_cut(g, 3, 3).has_value());
    std::vector<std::string> notes;
    K5FreeOptions opt;
    opt.log = [&](const std::string& s) { notes.push_back(s); };
    try {
        decompose_k5_free(g, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotK5Free);
    }
    EXPECT_FALSE(notes.empty());
}

TEST(DecomposeK5Free, ThreeCutWithIsolatedSide) {
    // K3,3 with a triangle matched to one side; that side is a (3,3)-cut
    Graph g = complete_bipartite(3, 3);
    for (int i = 0; i < 3; ++i) g.add_vertex();
    g.add_edge(6, 7);
    g.add_edge(7, 8);
    g.add_edge(6, 8);
    for (int i = 0; i < 3; ++i) g.add_edge(i, 6 + i);
    ASSERT_FALSE(k5_minor_by_partitions(g));
    auto tree = decompose_k5_free(g);
    check_reassembly(tree, g);
    EXPECT_GT(tree.nodes.size(), 1u);
}
