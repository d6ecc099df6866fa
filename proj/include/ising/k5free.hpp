#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ising/decomposition.hpp"
#include "ising/graph.hpp"

namespace ising {

enum class BlockTreeKind { TwoBlock, ThreeThreeBlock };

struct BlockTreeNode {
    int id = 0;
    int color = 1;                                   // 1: piece, 2: cut set
    std::vector<int> vertices;                       // ascending vertex ids of the input graph
    std::vector<std::pair<int, int>> edges;          // real edges (u < v); empty for color 2
    std::vector<std::pair<int, int>> virtual_edges;  // edges added by splitting (u < v)
};

struct BlockTree {
    BlockTreeKind kind = BlockTreeKind::TwoBlock;
    std::vector<BlockTreeNode> nodes;
    std::vector<std::pair<int, int>> tree_edges;  // (color-2 node, color-1 node)
};

// Recursive split on (2,2)-cuts. Throws NotBiconnected.
BlockTree two_block_tree(const Graph& g);

// Recursive split on (3,3)-cuts; pieces with at most `keep_size` vertices are
// not split further. Throws Not3Connected.
BlockTree three_three_block_tree(const Graph& g, int keep_size = 0);

// Exact K5-minor test by exhaustive edge contraction (exponential; meant for
// small graphs).
bool has_k5_minor(const Graph& g);

struct K5FreeOptions {
    // Receives a note whenever the (3,2)-cut fallback is used.
    std::function<void(const std::string&)> log;
};

// 8-nice decomposition of a K5-minor-free graph. Throws NotK5Free.
DecompositionTree decompose_k5_free(const Graph& g, const K5FreeOptions& options = {});

}  // namespace ising
