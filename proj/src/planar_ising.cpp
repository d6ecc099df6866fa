#include "ising/planar_ising.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include <Eigen/LU>

#include "ising/error.hpp"
#include "ising/pfaffian.hpp"
#include "ising/planarity.hpp"

namespace ising {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - kLog2;
}

}  // namespace

PlanarIsingSolver::PlanarIsingSolver(const Graph& g) : graph_(g) {
    auto result = planarity_test(graph_);
    if (!std::holds_alternative<PlanarEmbedding>(result))
        throw Error(ErrorCode::NotPlanar, "graph is not planar");
    system_ = fisher_expand(graph_, std::get<PlanarEmbedding>(result));
    kasteleyn_orient(system_);
}

namespace {

Eigen::MatrixXd weighted_matrix(const KasteleynSystem& sys, const std::vector<double>& j, double& prefactor) {
    const Graph& g = sys.expanded_graph;
    if (j.size() != sys.edge_image.size())
        throw Error(ErrorCode::InvalidInput, "interaction count does not match the graph");
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!sys.gadget_internal[e]) continue;
        const double w = sys.orientation[e] ? 1.0 : -1.0;
        k(g.edge(e).u, g.edge(e).v) = w;
        k(g.edge(e).v, g.edge(e).u) = -w;
    }
    prefactor = sys.original_vertices * kLog2;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!std::isfinite(j[i])) throw Error(ErrorCode::InvalidInput, "non-finite interaction");
        const int e = sys.edge_image[i];
        const double t = sys.orientation[e] ? std::tanh(j[i]) : -std::tanh(j[i]);
        k(g.edge(e).u, g.edge(e).v) = t;
        k(g.edge(e).v, g.edge(e).u) = -t;
        prefactor += log_cosh(j[i]);
    }
    return k;
}

}  // namespace

double PlanarIsingSolver::log_z(const std::vector<double>& j) const {
    double prefactor = 0.0;
    Eigen::MatrixXd k = weighted_matrix(system_, j, prefactor);
    if (k.rows() == 0) return prefactor;
    const PfaffianValue pf = pfaffian(std::move(k));
    if (pf.sign * system_.reference_sign != 1 || !std::isfinite(pf.log_abs))
        throw Error(ErrorCode::NumericalFailure, "Pfaffian has non-positive sign relative to the reference matching");
    return prefactor + pf.log_abs;
}

PlanarEvaluation PlanarIsingSolver::evaluate(const std::vector<double>& j) const {
    double prefactor = 0.0;
    Eigen::MatrixXd k = weighted_matrix(system_, j, prefactor);
    PlanarEvaluation out;
    out.marginals.assign(j.size(), 0.0);
    if (k.rows() == 0) {
        out.log_z = prefactor;
        return out;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
    const auto& lu_matrix = lu.matrixLU();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < lu_matrix.rows(); ++i) {
        const double d = std::abs(lu_matrix(i, i));
        if (d == 0.0 || !std::isfinite(d)) throw Error(ErrorCode::SingularMatrix, "Kasteleyn matrix is singular");
        log_det += std::log(d);
    }
    out.log_z = prefactor + 0.5 * log_det;
    if (j.empty()) return out;

    const Graph& g = system_.expanded_graph;
    const Eigen::Index n = k.rows();
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) rhs(g.edge(system_.edge_image[i]).u, static_cast<Eigen::Index>(i)) = 1.0;
    const Eigen::MatrixXd cols = lu.solve(rhs);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const int e = system_.edge_image[i];
        const double sigma = system_.orientation[e] ? 1.0 : -1.0;
        // d log Pf / d K(p, q) over the skew pair = (K^-1)(q, p)
        const double inv_qp = cols(g.edge(e).v, static_cast<Eigen::Index>(i));
        const double t = std::tanh(j[i]);
        out.marginals[i] = t + (1.0 - t * t) * sigma * inv_qp;
    }
    return out;
}

ConditionedPlanarSolver::ConditionedPlanarSolver(const Graph& g, std::vector<int> condition_vertices)
    : graph_(g), vertices_(std::move(condition_vertices)) {
    spin_slot_.assign(graph_.vertex_count(), -1);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const int v = vertices_[i];
        if (v < 0 || v >= graph_.vertex_count()) throw Error(ErrorCode::InvalidInput, "condition vertex out of range");
        if (spin_slot_[v] >= 0) throw Error(ErrorCode::InvalidInput, "vertex conditioned twice");
        spin_slot_[v] = static_cast<int>(i);
    }
    if (vertices_.empty()) {
        inner_ = std::make_unique<PlanarIsingSolver>(graph_);
        return;
    }
    if (!is_connected_set(graph_, vertices_))
        throw Error(ErrorCode::DisconnectedConditionSet, "conditioned vertices are not connected");
    contracted_ = contract_vertex_set(graph_, vertices_);
    inner_ = std::make_unique<PlanarIsingSolver>(contracted_.graph);
}

std::vector<double> ConditionedPlanarSolver::folded(const std::vector<double>& j, const std::vector<int>& spins,
                                                    double& constant) const {
    if (j.size() != static_cast<std::size_t>(graph_.edge_count()))
        throw Error(ErrorCode::InvalidInput, "interaction count does not match the graph");
    if (spins.size() != vertices_.size()) throw Error(ErrorCode::InvalidInput, "spin count does not match condition");
    for (int s : spins)
        if (s != 1 && s != -1) throw Error(ErrorCode::InvalidInput, "spins must be +1 or -1");
    constant = 0.0;
    for (int e : contracted_.internal_edges) {
        const auto& ed = graph_.edge(e);
        constant += j[e] * spins[spin_slot_[ed.u]] * spins[spin_slot_[ed.v]];
    }
    std::vector<double> jc(contracted_.graph.edge_count(), 0.0);
    for (int ce = 0; ce < contracted_.graph.edge_count(); ++ce) {
        for (const auto& o : contracted_.origins[ce]) {
            const double s = o.folded >= 0 ? spins[spin_slot_[o.folded]] : 1.0;
            jc[ce] += j[o.edge] * s;
        }
    }
    return jc;
}

double ConditionedPlanarSolver::log_z(const std::vector<double>& j, const std::vector<int>& spins) const {
    if (vertices_.empty()) {
        if (!spins.empty()) throw Error(ErrorCode::InvalidInput, "spin count does not match condition");
        return inner_->log_z(j);
    }
    double constant = 0.0;
    const auto jc = folded(j, spins, constant);
    return constant + inner_->log_z(jc) - kLog2;
}

PlanarEvaluation ConditionedPlanarSolver::evaluate(const std::vector<double>& j, const std::vector<int>& spins) const {
    if (vertices_.empty()) {
        if (!spins.empty()) throw Error(ErrorCode::InvalidInput, "spin count does not match condition");
        return inner_->evaluate(j);
    }
    double constant = 0.0;
    const auto jc = folded(j, spins, constant);
    PlanarEvaluation inner = inner_->evaluate(jc);
    PlanarEvaluation out;
    out.log_z = constant + inner.log_z - kLog2;
    out.marginals.assign(graph_.edge_count(), 0.0);
    // E'[x_z x_b] equals E[x_b | x_z = +1] by flip symmetry of the contracted model
    for (int e = 0; e < graph_.edge_count(); ++e) {
        const auto& ed = graph_.edge(e);
        const int su = spin_slot_[ed.u];
        const int sv = spin_slot_[ed.v];
        if (su >= 0 && sv >= 0) {
            out.marginals[e] = spins[su] * spins[sv];
            continue;
        }
        const int ce = *contracted_.graph.find_edge(contracted_.merge_map[ed.u], contracted_.merge_map[ed.v]);
        double sign = 1.0;
        if (su >= 0) sign = spins[su];
        if (sv >= 0) sign = spins[sv];
        out.marginals[e] = sign * inner.marginals[ce];
    }
    return out;
}

PlanarSampler::PlanarSampler(const Graph& g, std::vector<int> condition_vertices)
    : graph_(g), vertices_(std::move(condition_vertices)) {
    const int n = graph_.vertex_count();
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const int v = vertices_[i];
        if (v < 0 || v >= n) throw Error(ErrorCode::InvalidInput, "condition vertex out of range");
        if (slot[v] >= 0) throw Error(ErrorCode::InvalidInput, "vertex conditioned twice");
        slot[v] = static_cast<int>(i);
    }
    if (!is_connected_set(graph_, vertices_))
        throw Error(ErrorCode::DisconnectedConditionSet, "conditioned vertices are not connected");

    for (const auto& comp : connected_components(graph_)) {
        ComponentPlan plan;
        plan.sub = induced_subgraph(graph_, comp);
        const Graph& sg = plan.sub.graph;
        const int m = sg.vertex_count();
        std::vector<char> in(m, 0);
        for (const int v : vertices_) {
            auto it = std::find(comp.begin(), comp.end(), v);
            if (it == comp.end()) continue;
            const int local = static_cast<int>(it - comp.begin());
            plan.initial.push_back(local);
            plan.initial_slots.push_back(slot[v]);
        }
        if (plan.initial.empty()) {
            plan.initial.push_back(0);  // smallest id; drawn uniformly
            plan.initial_slots.push_back(-1);
        }
        for (int v : plan.initial) in[v] = 1;
        std::vector<int> order = plan.initial;
        if (static_cast<int>(order.size()) < m) plan.initial_solver = std::make_unique<ConditionedPlanarSolver>(sg, order);
        while (static_cast<int>(order.size()) < m) {
            int next = -1;
            for (int v = 0; v < m && next < 0; ++v) {
                if (in[v]) continue;
                for (const auto& inc : sg.incident(v)) {
                    if (in[inc.neighbor]) {
                        next = v;
                        break;
                    }
                }
            }
            if (next < 0) throw Error(ErrorCode::InternalError, "component is not connected");
            in[next] = 1;
            order.push_back(next);
            plan.steps.push_back({next, std::make_unique<ConditionedPlanarSolver>(sg, order)});
        }
        plans_.push_back(std::move(plan));
    }
}

SpinConfiguration PlanarSampler::sample(const std::vector<double>& j, const std::vector<int>& spins, Rng& rng) const {
    if (spins.size() != vertices_.size()) throw Error(ErrorCode::InvalidInput, "spin count does not match condition");
    if (j.size() != static_cast<std::size_t>(graph_.edge_count()))
        throw Error(ErrorCode::InvalidInput, "interaction count does not match the graph");
    SpinConfiguration x(graph_.vertex_count(), 0);
    std::vector<double> jsub;
    std::vector<int> assigned;
    for (const auto& plan : plans_) {
        jsub.resize(plan.sub.edge_to_host.size());
        for (std::size_t e = 0; e < jsub.size(); ++e) jsub[e] = j[plan.sub.edge_to_host[e]];
        assigned.clear();
        for (std::size_t i = 0; i < plan.initial.size(); ++i) {
            const int slot = plan.initial_slots[i];
            const int s = slot < 0 ? rng.spin() : spins[slot];
            assigned.push_back(s);
            x[plan.sub.to_host[plan.initial[i]]] = s;
        }
        if (plan.steps.empty()) continue;
        double current = plan.initial_solver->log_z(jsub, assigned);
        for (const auto& step : plan.steps) {
            assigned.push_back(1);
            const double plus = step.solver->log_z(jsub, assigned);
            if (rng.uniform() < std::exp(plus - current)) {
                current = plus;
            } else {
                assigned.back() = -1;
                current = step.solver->log_z(jsub, assigned);
            }
            x[plan.sub.to_host[step.vertex]] = assigned.back();
        }
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (x[vertices_[i]] != spins[i]) throw Error(ErrorCode::InternalError, "sample violates the condition");
    return x;
}

namespace {

void require_zero_field(const IsingModel& m) {
    m.check();
    if (!m.zero_field()) throw Error(ErrorCode::NotZeroField, "planar inference requires a zero-field model");
}

std::vector<int> spins_of(const Condition& s) {
    std::vector<int> out;
    for (const auto& a : s.assignments) out.push_back(a.spin);
    return out;
}

}  // namespace

double log_z_planar(const IsingModel& m) {
    require_zero_field(m);
    return PlanarIsingSolver(m.graph).log_z(m.interactions);
}

double conditioned_log_z(const IsingModel& m, const Condition& s) {
    require_zero_field(m);
    check_condition(s, m.vertex_count());
    if (s.size() > 3) throw Error(ErrorCode::InvalidInput, "conditioning supports at most three spins");
    return ConditionedPlanarSolver(m.graph, s.vertices()).log_z(m.interactions, spins_of(s));
}

std::vector<double> planar_edge_marginals(const IsingModel& m) {
    require_zero_field(m);
    return PlanarIsingSolver(m.graph).evaluate(m.interactions).marginals;
}

SpinConfiguration sample_planar(const IsingModel& m, const Condition& s, Rng& rng) {
    require_zero_field(m);
    check_condition(s, m.vertex_count());
    return PlanarSampler(m.graph, s.vertices()).sample(m.interactions, spins_of(s), rng);
}

}  // namespace ising
