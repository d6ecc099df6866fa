#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ising/decomposition.hpp"
#include "ising/grid.hpp"
#include "ising/inference.hpp"

namespace ising {

struct FamilyMember {
    std::string name;
    Graph graph;                     // all vertices of the apex graph, a subset of its edges
    std::vector<int> edge_to_apex;   // member edge -> apex-graph edge id
    DecompositionTree tree;          // decomposition of `graph`
};

struct SpanningFamily {
    int h = 0;
    Graph apex_graph;
    std::vector<FamilyMember> members;
};

// 2(H-1) separator members with single planar nodes plus the independent
// variables member (apex edges only).
SpanningFamily build_psg_family(int h);

// 2(H-2) separator members whose decompositions use a 10-vertex nonplanar
// root block, plus the independent variables member. Trees validate at c = 10.
SpanningFamily build_dsg_family(int h);

// The apex graph itself as the only member, as one brute-force/planar node.
SpanningFamily build_single_member_family(int h);

struct OptimizerOptions {
    int max_outer = 200;
    int max_inner = 100;
    double tolerance = 1e-5;   // infinity norm of projected gradients
    int history = 8;           // L-BFGS memory
    bool optimize_weights = true;
};

struct BoundResult {
    double bound = 0.0;  // upper bound on log Z of the apex model
    std::vector<double> rho;
    std::vector<std::vector<double>> member_interactions;
    std::vector<std::vector<double>> member_marginals;
    std::vector<double> blended;  // per apex-graph edge, averaged over covering members
    int outer_iterations = 0;
    int inner_iterations = 0;
    bool converged = false;
    double constraint_residual = 0.0;
    int monotonicity_violations = 0;  // accepted inner steps that increased the objective
};

// Minimizes sum_r rho_r log Z(G_r, J_r) subject to sum_r rho_r J_r = target.
// Throws CoverageError when some apex-graph edge is in no member.
class UpperBoundOptimizer {
public:
    UpperBoundOptimizer(const SpanningFamily& family, OptimizerOptions options = {});
    ~UpperBoundOptimizer();

    BoundResult minimize(const std::vector<double>& target) const;

    // Member log Z and marginals (indexed by member edges).
    DecompositionEngine::Evaluation evaluate_member(int r, const std::vector<double>& j) const;

private:
    struct State;

    double solve_inner(State& s) const;
    void finish(State& s, BoundResult& out) const;

    const SpanningFamily& family_;
    OptimizerOptions options_;
    std::vector<std::unique_ptr<DecompositionEngine>> engines_;
    std::vector<std::vector<std::pair<int, int>>> cover_;  // apex edge -> (member, member edge)
};

BoundResult optimize_upper_bound(const SpanningFamily& family, const std::vector<double>& target,
                                 const OptimizerOptions& options = {});

struct ApproxMarginals {
    std::vector<double> pairwise;  // P(x_u = x_v) per grid edge
    double singleton = 0.0;        // P(x_v = +1) at the chosen vertex
    int vertex = 0;
};

// Pairwise probabilities from the blended grid-edge marginals and the
// singleton at `vertex` (default: the central site) through its apex edge.
ApproxMarginals approx_marginals(const ApexModel& apex, const BoundResult& result, int vertex = -1);

// --- Varying Interaction experiment -----------------------------------------

struct ExperimentOptions {
    int h = 5;
    std::vector<double> alphas{1.0, 2.0, 3.0};
    int trials = 5;
    std::uint64_t seed = 0;
    std::vector<std::string> methods{"psg", "dsg"};
    OptimizerOptions optimizer;
    int jobs = 1;
    bool timing = false;
};

struct ExperimentRow {
    double alpha = 0.0;
    int trial = 0;
    std::string method;
    double h_bound = 0.0;   // bound on the grid log Z
    double logz_true = 0.0;
    double err_logz_norm = 0.0;
    double err_pairwise = 0.0;
    double err_singleton = 0.0;
    int iters = 0;
    double runtime_ms = 0.0;
    // audit fields (not written to CSV)
    double constraint_residual = 0.0;
    int monotonicity_violations = 0;
};

std::vector<ExperimentRow> run_varying_interaction(const ExperimentOptions& options);

std::string experiment_csv_header();
std::string experiment_csv_row(const ExperimentRow& row);

}  // namespace ising
