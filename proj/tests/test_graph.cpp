#include <gtest/gtest.h>

#include <algorithm>
#include <variant>

#include "generators.hpp"
#include "ising/error.hpp"
#include "ising/graph.hpp"
#include "ising/planarity.hpp"

using namespace ising;
using namespace ising::testing;

namespace {

int face_count(const Graph& g) {
    auto r = planarity_test(g);
    EXPECT_TRUE(std::holds_alternative<PlanarEmbedding>(r));
    return euler_face_count(g, std::get<PlanarEmbedding>(r));
}

// Components of g - x by plain BFS.
int components_without(const Graph& g, const std::vector<int>& x) {
    std::vector<char> removed(g.vertex_count(), 0);
    for (int v : x) removed[v] = 1;
    return count_components(g, removed);
}

}  // namespace

TEST(Graph, RejectsLoopsAndDuplicates) {
    Graph g(3);
    g.add_edge(0, 1);
    EXPECT_THROW(g.add_edge(1, 0), Error);
    EXPECT_THROW(g.add_edge(2, 2), Error);
    EXPECT_THROW(g.add_edge(0, 3), Error);
    EXPECT_EQ(g.edge(0).u, 0);
    EXPECT_EQ(*g.find_edge(1, 0), 0);
}

TEST(Planarity, CompleteGraphs) {
    EXPECT_EQ(face_count(complete_graph(4)), 4);
    auto r = planarity_test(complete_graph(5));
    ASSERT_TRUE(std::holds_alternative<NonplanarVerdict>(r));
    EXPECT_FALSE(std::get<NonplanarVerdict>(r).kuratowski_edges.empty());
    EXPECT_FALSE(is_planar(complete_bipartite(3, 3)));
    EXPECT_FALSE(is_planar(mobius_ladder(4)));
}

TEST(Planarity, GridFaceCount) {
    Graph g = rect_grid(15, 15);
    EXPECT_EQ(g.vertex_count(), 225);
    EXPECT_EQ(g.edge_count(), 420);
    EXPECT_EQ(face_count(g), 197);
}

TEST(Planarity, FaceLengthsAndEulerOnRandomGraphs) {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + trial % 12;
        Graph g = random_planar_graph(n, rng, 0.7);
        auto r = planarity_test(g);
        ASSERT_TRUE(std::holds_alternative<PlanarEmbedding>(r));
        const auto& emb = std::get<PlanarEmbedding>(r);
        std::size_t darts = 0;
        for (const auto& f : emb.faces) darts += f.size();
        EXPECT_EQ(darts, 2u * g.edge_count());
        const int c = static_cast<int>(connected_components(g).size());
        EXPECT_EQ(n - g.edge_count() + euler_face_count(g, emb), 1 + c);
    }
}

TEST(Planarity, EdgeCountPrefilter) {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = random_graph(6 + trial % 4, 0.9, rng);
        const int n = g.vertex_count();
        if (g.edge_count() > 3 * n - 6) {
            EXPECT_FALSE(is_planar(g));
            EXPECT_TRUE(std::holds_alternative<NonplanarVerdict>(planarity_test(g)));
        }
    }
}

TEST(Planarity, EmptyAndIsolated) {
    Graph g(3);
    auto r = planarity_test(g);
    ASSERT_TRUE(std::holds_alternative<PlanarEmbedding>(r));
    EXPECT_EQ(euler_face_count(g, std::get<PlanarEmbedding>(r)), 1);
}

TEST(Contraction, PathPair) {
    Graph g = path_graph(3);  // a=0, b=1, c=2
    auto c = contract_vertex_set(g, {0, 1});
    EXPECT_EQ(c.graph.vertex_count(), 2);
    EXPECT_EQ(c.graph.edge_count(), 1);
    EXPECT_EQ(c.merge_map, (std::vector<int>{0, 0, 1}));
    EXPECT_EQ(c.internal_edges, (std::vector<int>{0}));
}

TEST(Contraction, TriangleCollapsesParallelEdges) {
    Graph g = cycle_graph(3);  // edges (0,1) (1,2) (0,2)
    auto c = contract_vertex_set(g, {0, 1});
    ASSERT_EQ(c.graph.edge_count(), 1);
    ASSERT_EQ(c.origins[0].size(), 2u);
    std::vector<int> folded{c.origins[0][0].folded, c.origins[0][1].folded};
    std::sort(folded.begin(), folded.end());
    EXPECT_EQ(folded, (std::vector<int>{0, 1}));
}

TEST(Contraction, GridStaysPlanar) {
    Graph g = rect_grid(3, 3);
    auto c = contract_vertex_set(g, {4, 5});
    EXPECT_EQ(c.graph.vertex_count(), 8);
    EXPECT_TRUE(is_planar(c.graph));
}

TEST(Contraction, RejectsDisconnectedSet) {
    Graph g = path_graph(3);
    try {
        contract_vertex_set(g, {0, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DisconnectedSet);
    }
}

TEST(Contraction, MergeMapRecoversPartition) {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = random_planar_graph(9, rng);
        auto subsets = connected_subsets(g, 3);
        const auto& s = subsets[trial % subsets.size()];
        auto c = contract_vertex_set(g, s);
        EXPECT_EQ(c.graph.vertex_count(), g.vertex_count() - static_cast<int>(s.size()) + 1);
        for (int v = 0; v < g.vertex_count(); ++v) {
            const bool in_s = std::find(s.begin(), s.end(), v) != s.end();
            EXPECT_EQ(c.merge_map[v] == c.merged_vertex, in_s);
        }
        std::size_t originals = c.internal_edges.size();
        for (const auto& o : c.origins) originals += o.size();
        EXPECT_EQ(originals, static_cast<std::size_t>(g.edge_count()));
        EXPECT_TRUE(is_planar(c.graph));
    }
}

TEST(Components, Basic) {
    EXPECT_TRUE(connected_components(Graph(0)).empty());
    Graph two(4, {{0, 1}, {2, 3}});
    EXPECT_EQ(connected_components(two).size(), 2u);
    EXPECT_EQ(connected_components(rect_grid(4, 4)).size(), 1u);
    Graph mixed(5, {{3, 4}, {0, 2}});
    auto comps = connected_components(mixed);
    ASSERT_EQ(comps.size(), 3u);
    EXPECT_EQ(comps[0], (std::vector<int>{0, 2}));
    EXPECT_EQ(comps[1], (std::vector<int>{1}));
    EXPECT_EQ(comps[2], (std::vector<int>{3, 4}));
}

TEST(Biconnected, Examples) {
    Graph bowtie(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
    auto b = biconnected_components(bowtie);
    EXPECT_EQ(b.components.size(), 2u);
    EXPECT_EQ(b.cut_vertices, (std::vector<int>{2}));

    auto c = biconnected_components(cycle_graph(6));
    EXPECT_EQ(c.components.size(), 1u);
    EXPECT_TRUE(c.cut_vertices.empty());

    auto p = biconnected_components(path_graph(4));
    EXPECT_EQ(p.components.size(), 3u);
    EXPECT_EQ(p.cut_vertices, (std::vector<int>{1, 2}));
}

TEST(Biconnected, EdgePartitionAndSharedVertices) {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = random_graph(10, 0.25, rng);
        auto b = biconnected_components(g);
        std::vector<int> count(g.edge_count(), 0);
        std::vector<std::vector<int>> vsets;
        for (const auto& comp : b.components) {
            std::vector<int> vs;
            for (int e : comp) {
                ++count[e];
                vs.push_back(g.edge(e).u);
                vs.push_back(g.edge(e).v);
            }
            std::sort(vs.begin(), vs.end());
            vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
            vsets.push_back(vs);
        }
        for (int c : count) EXPECT_EQ(c, 1);
        for (std::size_t i = 0; i < vsets.size(); ++i) {
            for (std::size_t j = i + 1; j < vsets.size(); ++j) {
                std::vector<int> common;
                std::set_intersection(vsets[i].begin(), vsets[i].end(), vsets[j].begin(), vsets[j].end(),
                                      std::back_inserter(common));
                EXPECT_LE(common.size(), 1u);
            }
        }
        // cut vertices are exactly the vertices whose removal adds components
        const int base = count_components(g, std::vector<char>(g.vertex_count(), 0));
        for (int v = 0; v < g.vertex_count(); ++v) {
            const bool is_cut = std::binary_search(b.cut_vertices.begin(), b.cut_vertices.end(), v);
            EXPECT_EQ(is_cut, components_without(g, {v}) > base) << "vertex " << v;
        }
    }
}

TEST(FindCut, Examples) {
    Graph two_triangles(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}});
    auto cut = find_cut(two_triangles, 2, 2);
    ASSERT_TRUE(cut);
    EXPECT_EQ(*cut, (std::vector<int>{0, 1}));
    EXPECT_FALSE(find_cut(complete_graph(4), 2, 2));

    // triangle 0,1,2 with a pendant path of length 2 to a new vertex from each corner,
    // the far ends joined to a common hub so the graph stays connected
    Graph g(7, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 4}, {2, 5}, {3, 6}, {4, 6}, {5, 6}});
    auto c3 = find_cut(g, 3, 3);
    ASSERT_TRUE(c3);
    EXPECT_GE(components_without(g, *c3), 3);

    // three 4-vertex blocks hanging off the triple {0,1,2}
    Graph h(6, {{0, 3}, {1, 3}, {2, 3}, {0, 4}, {1, 4}, {2, 4}, {0, 5}, {1, 5}, {2, 5}});
    auto c = find_cut(h, 3, 3);
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, (std::vector<int>{0, 1, 2}));
}

TEST(FindCut, AgreesWithPairEnumeration) {
    Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 5 + trial % 10;
        Graph g = random_graph(n, 0.35, rng);
        if (!is_connected(g)) continue;
        std::optional<std::vector<int>> expected;
        for (int u = 0; u < n && !expected; ++u)
            for (int v = u + 1; v < n && !expected; ++v)
                if (components_without(g, {u, v}) >= 2) expected = std::vector<int>{u, v};
        EXPECT_EQ(find_cut(g, 2, 2), expected);

        std::optional<std::vector<int>> expected3;
        for (int u = 0; u < n && !expected3; ++u)
            for (int v = u + 1; v < n && !expected3; ++v)
                for (int w = v + 1; w < n && !expected3; ++w)
                    if (components_without(g, {u, v, w}) >= 3) expected3 = std::vector<int>{u, v, w};
        EXPECT_EQ(find_cut(g, 3, 3), expected3);
    }
}
