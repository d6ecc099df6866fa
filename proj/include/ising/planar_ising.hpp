#pragma once

#include <memory>
#include <vector>

#include "ising/graph.hpp"
#include "ising/kasteleyn.hpp"
#include "ising/model.hpp"
#include "ising/rng.hpp"

namespace ising {

struct PlanarEvaluation {
    double log_z;
    std::vector<double> marginals;  // E[x_u x_v] per edge
};

// Exact zero-field inference on a fixed planar graph. The expansion,
// embedding and orientation are built once; each call only refills weights.
class PlanarIsingSolver {
public:
    explicit PlanarIsingSolver(const Graph& g);  // throws NotPlanar

    const Graph& graph() const { return graph_; }
    const KasteleynSystem& system() const { return system_; }

    // log Z through the Pfaffian; NumericalFailure if its sign is wrong.
    double log_z(const std::vector<double>& j) const;
    // log Z and all edge expectations from one LU factorization.
    PlanarEvaluation evaluate(const std::vector<double>& j) const;

private:
    Graph graph_;
    KasteleynSystem system_;
};

// Inference conditioned on spins of a fixed connected vertex set: the set is
// contracted into one vertex with interactions folded by the spins.
class ConditionedPlanarSolver {
public:
    ConditionedPlanarSolver(const Graph& g, std::vector<int> condition_vertices);

    const std::vector<int>& condition_vertices() const { return vertices_; }

    // spins[i] is the spin of condition_vertices()[i]
    double log_z(const std::vector<double>& j, const std::vector<int>& spins) const;
    // conditional log Z and E[x_u x_v | S] for every edge of the graph
    PlanarEvaluation evaluate(const std::vector<double>& j, const std::vector<int>& spins) const;

private:
    std::vector<double> folded(const std::vector<double>& j, const std::vector<int>& spins, double& constant) const;

    Graph graph_;
    std::vector<int> vertices_;
    std::vector<int> spin_slot_;  // graph vertex -> index into spins, or -1
    ContractedGraph contracted_;
    std::unique_ptr<PlanarIsingSolver> inner_;
};

// Exact sampler by sequential conditioning, with the per-step solvers
// prepared once for a fixed conditioned vertex set.
class PlanarSampler {
public:
    PlanarSampler(const Graph& g, std::vector<int> condition_vertices);

    SpinConfiguration sample(const std::vector<double>& j, const std::vector<int>& spins, Rng& rng) const;

private:
    struct Step {
        int vertex;  // local vertex drawn at this step
        std::unique_ptr<ConditionedPlanarSolver> solver;  // conditions on all earlier vertices plus `vertex`
    };
    struct ComponentPlan {
        Subgraph sub;
        std::vector<int> initial;        // local vertices fixed by the condition (in order)
        std::vector<int> initial_slots;  // index into the spins argument
        std::unique_ptr<ConditionedPlanarSolver> initial_solver;
        std::vector<Step> steps;
    };

    Graph graph_;
    std::vector<int> vertices_;
    std::vector<ComponentPlan> plans_;
};

// Model-level entry points.
double log_z_planar(const IsingModel& m);
double conditioned_log_z(const IsingModel& m, const Condition& s);
std::vector<double> planar_edge_marginals(const IsingModel& m);
SpinConfiguration sample_planar(const IsingModel& m, const Condition& s, Rng& rng);

}  // namespace ising
