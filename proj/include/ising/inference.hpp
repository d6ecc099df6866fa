#pragma once

#include <memory>
#include <vector>

#include "ising/decomposition.hpp"
#include "ising/model.hpp"
#include "ising/planar_ising.hpp"
#include "ising/rng.hpp"

namespace ising {

// Navel sign patterns are indexed like enumerate_patterns: bit i set <=> the
// i-th navel vertex (ascending host id) has spin -1.

struct ChildCoefficients {
    int child = 0;
    int navel_size = 0;
    // log Z_child(y) = a + b y0 y1 + c y0 y2 + d y1 y2 for navel sizes 2 and 3
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

// Node model after folding in all children.
struct EffectiveComponentModel {
    int node = 0;
    IsingModel model;                    // augmented model in local vertex ids
    std::vector<int> to_host;            // local vertex -> host vertex
    std::vector<int> navel;              // local ids of the navel vertices
    std::vector<int> host_edge;          // local edge -> host edge id, or -1 for added edges
    std::vector<ChildCoefficients> children;
    double log_m = 0.0;
    std::vector<double> log_z_table;     // log Z of the subtree conditioned on each navel pattern
    // Optional: per pattern, E[x_u x_v | pattern] for every local edge.
    std::vector<std::vector<double>> conditional_expectations;
};

struct InferenceCache {
    double log_z = 0.0;
    std::vector<EffectiveComponentModel> components;  // indexed by node id
};

struct EngineOptions {
    // Use the planar engine for small nodes whose augmented graph is planar.
    bool prefer_planar = false;
    // Check the zero-field flip symmetry of every enumerated table.
    bool verify_symmetry = true;
};

enum class NodeEngine { BruteForce, Planar };

// Exact inference over a validated decomposition. Node structures (local
// graphs, Kasteleyn systems) are built once and reused for every J.
class DecompositionEngine {
public:
    // Throws InvalidDecomposition when validate() reports violations.
    DecompositionEngine(const Graph& g, DecompositionTree tree, EngineOptions options = {});
    ~DecompositionEngine();
    DecompositionEngine(DecompositionEngine&&) noexcept;
    DecompositionEngine& operator=(DecompositionEngine&&) noexcept;

    const Graph& graph() const { return graph_; }
    const DecompositionTree& tree() const { return tree_; }
    NodeEngine node_engine(int t) const;

    // Leaf-to-root pass. With expectations, the conditional edge expectations
    // needed by edge_marginals are stored in the cache as a by-product.
    InferenceCache infer(const std::vector<double>& j, bool with_expectations = false) const;

    // E[x_u x_v] for every edge of the graph; fills in missing conditional
    // expectations on the fly.
    std::vector<double> edge_marginals(const InferenceCache& cache) const;

    struct Evaluation {
        double log_z;
        std::vector<double> marginals;
    };
    Evaluation evaluate(const std::vector<double>& j) const;

private:
    friend class DecompositionSampler;
    struct NodePlan;

    std::vector<std::vector<double>> conditional_expectations(const NodePlan& plan,
                                                              const EffectiveComponentModel& comp) const;

    Graph graph_;
    DecompositionTree tree_;
    EngineOptions options_;
    std::vector<int> postorder_;
    std::vector<std::unique_ptr<NodePlan>> plans_;
};

// Root-to-leaf sampler for fixed interactions.
class DecompositionSampler {
public:
    DecompositionSampler(const DecompositionEngine& engine, InferenceCache cache);
    ~DecompositionSampler();

    SpinConfiguration draw(Rng& rng) const;

private:
    struct NodeSampler;

    const DecompositionEngine& engine_;
    InferenceCache cache_;
    std::vector<int> preorder_;
    std::vector<std::unique_ptr<NodeSampler>> samplers_;
};

// Model-level entry points; the model must be zero-field on the tree's graph.
double infer_log_z(const DecompositionTree& tree, const IsingModel& m);
std::vector<double> edge_marginals(const DecompositionTree& tree, const IsingModel& m);
SpinConfiguration sample(const DecompositionTree& tree, const IsingModel& m, Rng& rng);
std::vector<SpinConfiguration> sample(const DecompositionTree& tree, const IsingModel& m, int count, Rng& rng);

}  // namespace ising
