#include "ising/approx.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <thread>

#include "ising/error.hpp"

namespace ising {

// --- families ------------------------------------------------------------------

namespace {

constexpr int kFamilyC = 10;

class MemberBuilder {
public:
    MemberBuilder(const Graph& apex_graph, int h, bool transpose)
        : g_(apex_graph), h_(h), apex_(h * h), transpose_(transpose) {}

    int site(int i, int j) const { return transpose_ ? j * h_ + i : i * h_ + j; }
    int apex() const { return apex_; }

    void edge(int u, int v) {
        auto e = g_.find_edge(u, v);
        if (!e) throw Error(ErrorCode::InternalError, "family edge missing from the apex graph");
        edges_.push_back(*e);
    }
    void grid_edge(int i1, int j1, int i2, int j2) { edge(site(i1, j1), site(i2, j2)); }
    void apex_row(int i) {
        for (int j = 0; j < h_; ++j) edge(site(i, j), apex_);
    }

    int node(std::vector<int> vertices, int parent) {
        std::sort(vertices.begin(), vertices.end());
        nodes_.push_back(std::move(vertices));
        parents_.push_back(parent);
        return static_cast<int>(nodes_.size()) - 1;
    }

    FamilyMember build(std::string name) {
        FamilyMember m;
        m.name = std::move(name);
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        m.graph = Graph(g_.vertex_count());
        for (int e : edges_) {
            m.graph.add_edge(g_.edge(e).u, g_.edge(e).v);
            m.edge_to_apex.push_back(e);
        }
        if (nodes_.empty()) {
            m.tree = single_node_decomposition(m.graph, kFamilyC);
        } else {
            m.tree.c = kFamilyC;
            m.tree.root = 0;
            for (std::size_t t = 0; t < nodes_.size(); ++t) {
                DecompositionNode n;
                n.id = static_cast<int>(t);
                if (parents_[t] >= 0) n.parent = parents_[t];
                n.vertices = nodes_[t];
                m.tree.nodes.push_back(std::move(n));
            }
            m.tree = normalize_ownership(m.tree, m.graph);
        }
        const auto report = validate(m.tree, m.graph);
        if (!report.ok()) throw Error(ErrorCode::InternalError, "family member " + m.name + ": " + report.summary());
        return m;
    }

private:
    const Graph& g_;
    int h_;
    int apex_;
    bool transpose_;
    std::vector<int> edges_;
    std::vector<std::vector<int>> nodes_;
    std::vector<int> parents_;
};

Graph apex_graph_of(int h) {
    Graph g = grid_graph(h);
    const int a = g.add_vertex();
    for (int v = 0; v < h * h; ++v) g.add_edge(v, a);
    return g;
}

FamilyMember independent_member(const Graph& g, int h) {
    MemberBuilder b(g, h, false);
    for (int i = 0; i < h; ++i) b.apex_row(i);
    return b.build("independent");
}

// Rows r and r+1 separated: every grid edge but the verticals between them,
// apex joined to both boundary rows.
FamilyMember psg_member(const Graph& g, int h, int r, bool transpose) {
    MemberBuilder b(g, h, transpose);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            if (j + 1 < h) b.grid_edge(i, j, i, j + 1);
            if (i + 1 < h && i != r) b.grid_edge(i, j, i + 1, j);
        }
    b.apex_row(r);
    b.apex_row(r + 1);
    return b.build(std::string(transpose ? "psg-col-" : "psg-row-") + std::to_string(r));
}

// Strip rows r, r+1 with apex edges to rows r-1 .. r+2. The root block holds
// rows r..r+2, columns 0..2 and the apex (10 vertices, nonplanar); further
// 2 x 3 strip blocks are chained along shared columns; the parts above and
// below hang off the root block through {apex, (r,0)} and {apex, (r+2,2)}.
FamilyMember dsg_member(const Graph& g, int h, int r, bool transpose) {
    MemberBuilder b(g, h, transpose);
    const int a = b.apex();
    for (int i = 0; i < h; ++i)
        for (int j = 0; j + 1 < h; ++j) b.grid_edge(i, j, i, j + 1);
    for (int i = 0; i + 1 < r; ++i)
        for (int j = 0; j < h; ++j) b.grid_edge(i, j, i + 1, j);
    if (r >= 1) b.grid_edge(r - 1, 0, r, 0);
    for (int j = 0; j < h; ++j) b.grid_edge(r, j, r + 1, j);
    for (int j = 0; j < 3; ++j) b.grid_edge(r + 1, j, r + 2, j);
    if (r + 3 < h)
        for (int j = 2; j < h; ++j) b.grid_edge(r + 2, j, r + 3, j);
    for (int i = r + 3; i + 1 < h; ++i)
        for (int j = 0; j < h; ++j) b.grid_edge(i, j, i + 1, j);
    if (r >= 1) b.apex_row(r - 1);
    b.apex_row(r);
    b.apex_row(r + 1);
    b.apex_row(r + 2);

    std::vector<int> root{a};
    for (int i = r; i <= r + 2; ++i)
        for (int j = 0; j < 3; ++j) root.push_back(b.site(i, j));
    const int root_id = b.node(root, -1);
    int prev = root_id;
    for (int k = 1; 2 * k < h - 1; ++k) {
        std::vector<int> block{a};
        for (int i = r; i <= r + 1; ++i)
            for (int j = 2 * k; j <= std::min(2 * k + 2, h - 1); ++j) block.push_back(b.site(i, j));
        prev = b.node(block, prev);
    }
    if (r >= 1) {
        std::vector<int> top{a, b.site(r, 0)};
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < h; ++j) top.push_back(b.site(i, j));
        b.node(top, root_id);
    }
    std::vector<int> bottom{a};
    for (int i = r + 2; i < h; ++i)
        for (int j = 0; j < h; ++j)
            if (!(i == r + 2 && j < 2)) bottom.push_back(b.site(i, j));
    b.node(bottom, root_id);
    return b.build(std::string(transpose ? "dsg-col-" : "dsg-row-") + std::to_string(r));
}

}  // namespace

SpanningFamily build_psg_family(int h) {
    if (h < 3) throw Error(ErrorCode::InvalidInput, "PSG family needs H >= 3");
    SpanningFamily f;
    f.h = h;
    f.apex_graph = apex_graph_of(h);
    for (bool transpose : {false, true})
        for (int r = 0; r + 1 < h; ++r) f.members.push_back(psg_member(f.apex_graph, h, r, transpose));
    f.members.push_back(independent_member(f.apex_graph, h));
    return f;
}

SpanningFamily build_dsg_family(int h) {
    if (h < 4) throw Error(ErrorCode::InvalidInput, "DSG family needs H >= 4");
    SpanningFamily f;
    f.h = h;
    f.apex_graph = apex_graph_of(h);
    for (bool transpose : {false, true})
        for (int r = 0; r + 2 < h; ++r) f.members.push_back(dsg_member(f.apex_graph, h, r, transpose));
    f.members.push_back(independent_member(f.apex_graph, h));
    return f;
}

SpanningFamily build_single_member_family(int h) {
    SpanningFamily f;
    f.h = h;
    f.apex_graph = apex_graph_of(h);
    FamilyMember m;
    m.name = "apex-graph";
    m.graph = f.apex_graph;
    m.edge_to_apex.resize(f.apex_graph.edge_count());
    std::iota(m.edge_to_apex.begin(), m.edge_to_apex.end(), 0);
    m.tree = single_node_decomposition(m.graph, std::max(kFamilyC, m.graph.vertex_count()));
    f.members.push_back(std::move(m));
    return f;
}

// --- optimizer -------------------------------------------------------------------

namespace {

constexpr double kMaxStep = 2.0;  // largest change of any coordinate per line search

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

// Limited-memory BFGS two-loop recursion: returns -H g.
class Lbfgs {
public:
    explicit Lbfgs(int history) : history_(history) {}

    void reset() {
        s_.clear();
        y_.clear();
    }
    bool empty() const { return s_.empty(); }

    void push(std::vector<double> s, std::vector<double> y) {
        const double sy = dot(s, y);
        if (sy <= 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) return;
        s_.push_back(std::move(s));
        y_.push_back(std::move(y));
        if (static_cast<int>(s_.size()) > history_) {
            s_.pop_front();
            y_.pop_front();
        }
    }

    std::vector<double> direction(const std::vector<double>& g) const {
        std::vector<double> q = g;
        const int k = static_cast<int>(s_.size());
        std::vector<double> alpha(k);
        for (int i = k - 1; i >= 0; --i) {
            alpha[i] = dot(s_[i], q) / dot(y_[i], s_[i]);
            for (std::size_t n = 0; n < q.size(); ++n) q[n] -= alpha[i] * y_[i][n];
        }
        if (k > 0) {
            const double gamma = dot(s_.back(), y_.back()) / dot(y_.back(), y_.back());
            for (double& x : q) x *= gamma;
        }
        for (int i = 0; i < k; ++i) {
            const double beta = dot(y_[i], q) / dot(y_[i], s_[i]);
            for (std::size_t n = 0; n < q.size(); ++n) q[n] += s_[i][n] * (alpha[i] - beta);
        }
        for (double& x : q) x = -x;
        return q;
    }

private:
    int history_;
    std::deque<std::vector<double>> s_, y_;
};

}  // namespace

struct UpperBoundOptimizer::State {
    std::vector<double> target;
    std::vector<double> u;
    std::vector<double> rho;
    std::vector<std::vector<double>> j;        // per member
    std::vector<double> log_z;                 // per member
    std::vector<std::vector<double>> marginals;
    double value = 0.0;
    int inner_iterations = 0;
    int violations = 0;
    bool inner_converged = false;
};

UpperBoundOptimizer::UpperBoundOptimizer(const SpanningFamily& family, OptimizerOptions options)
    : family_(family), options_(options) {
    cover_.resize(family_.apex_graph.edge_count());
    for (std::size_t r = 0; r < family_.members.size(); ++r) {
        const auto& m = family_.members[r];
        engines_.push_back(std::make_unique<DecompositionEngine>(m.graph, m.tree));
        for (std::size_t k = 0; k < m.edge_to_apex.size(); ++k)
            cover_[m.edge_to_apex[k]].push_back({static_cast<int>(r), static_cast<int>(k)});
    }
}

UpperBoundOptimizer::~UpperBoundOptimizer() = default;

DecompositionEngine::Evaluation UpperBoundOptimizer::evaluate_member(int r, const std::vector<double>& j) const {
    return engines_.at(r)->evaluate(j);
}

namespace {

using Stacked = std::vector<std::vector<double>>;

std::vector<double> flatten(const Stacked& x) {
    std::vector<double> out;
    for (const auto& v : x) out.insert(out.end(), v.begin(), v.end());
    return out;
}

Stacked unflatten(const std::vector<double>& flat, const Stacked& shape) {
    Stacked out(shape.size());
    std::size_t pos = 0;
    for (std::size_t r = 0; r < shape.size(); ++r) {
        out[r].assign(flat.begin() + pos, flat.begin() + pos + shape[r].size());
        pos += shape[r].size();
    }
    return out;
}

}  // namespace

double UpperBoundOptimizer::solve_inner(State& s) const {
    const int members = static_cast<int>(family_.members.size());
    // orthogonal projection onto the constraint set, per apex edge
    auto project_point = [&](Stacked& x) {
        for (std::size_t e = 0; e < cover_.size(); ++e) {
            double sum = 0.0, norm = 0.0;
            for (const auto& [r, k] : cover_[e]) {
                sum += s.rho[r] * x[r][k];
                norm += s.rho[r] * s.rho[r];
            }
            const double shift = (sum - s.target[e]) / norm;
            for (const auto& [r, k] : cover_[e]) x[r][k] -= s.rho[r] * shift;
        }
    };
    auto project_tangent = [&](Stacked& g) {
        for (std::size_t e = 0; e < cover_.size(); ++e) {
            double sum = 0.0, norm = 0.0;
            for (const auto& [r, k] : cover_[e]) {
                sum += s.rho[r] * g[r][k];
                norm += s.rho[r] * s.rho[r];
            }
            for (const auto& [r, k] : cover_[e]) g[r][k] -= s.rho[r] * sum / norm;
        }
    };
    struct Point {
        Stacked x;
        double f;
        std::vector<double> log_z;
        Stacked marginals;
        Stacked pg;  // projected gradient
    };
    auto evaluate = [&](Stacked x) {
        Point p;
        p.f = 0.0;
        p.log_z.resize(members);
        p.marginals.resize(members);
        p.pg.resize(members);
        for (int r = 0; r < members; ++r) {
            DecompositionEngine::Evaluation ev;
            try {
                ev = engines_[r]->evaluate(x[r]);
            } catch (const Error& err) {
                // saturated couplings; the line search backs off from such trials
                if (err.code() != ErrorCode::SingularMatrix && err.code() != ErrorCode::NumericalFailure) throw;
                p.f = std::numeric_limits<double>::infinity();
                p.x = std::move(x);
                return p;
            }
            p.log_z[r] = ev.log_z;
            p.f += s.rho[r] * ev.log_z;
            p.pg[r] = ev.marginals;
            for (double& v : p.pg[r]) v *= s.rho[r];
            p.marginals[r] = std::move(ev.marginals);
        }
        project_tangent(p.pg);
        p.x = std::move(x);
        return p;
    };

    Stacked x0 = s.j;
    project_point(x0);
    Point cur = evaluate(std::move(x0));
    Lbfgs memory(options_.history);
    s.inner_converged = false;
    for (int it = 0; it < options_.max_inner; ++it) {
        const auto g = flatten(cur.pg);
        if (inf_norm(g) <= options_.tolerance) {
            s.inner_converged = true;
            break;
        }
        auto d = memory.direction(g);
        double slope = dot(d, g);
        if (!(slope < 0.0)) {
            memory.reset();
            d = g;
            for (double& v : d) v = -v;
            slope = -dot(g, g);
        }
        double t = memory.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(g, g))) : 1.0;
        t = std::min(t, kMaxStep / inf_norm(d));
        const auto x_flat = flatten(cur.x);
        bool accepted = false;
        Point next;
        for (int ls = 0; ls < 12; ++ls) {
            std::vector<double> trial = x_flat;
            for (std::size_t n = 0; n < trial.size(); ++n) trial[n] += t * d[n];
            Stacked xt = unflatten(trial, cur.x);
            project_point(xt);
            next = evaluate(std::move(xt));
            if (std::isfinite(next.f) && next.f <= cur.f + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        ++s.inner_iterations;
        if (next.f > cur.f) ++s.violations;
        auto sv = flatten(next.x);
        for (std::size_t n = 0; n < sv.size(); ++n) sv[n] -= x_flat[n];
        auto yv = flatten(next.pg);
        for (std::size_t n = 0; n < yv.size(); ++n) yv[n] -= g[n];
        memory.push(std::move(sv), std::move(yv));
        const double decrease = cur.f - next.f;
        cur = std::move(next);
        if (decrease <= 1e-15 * std::max(1.0, std::abs(cur.f))) {
            s.inner_converged = inf_norm(flatten(cur.pg)) <= options_.tolerance;
            break;
        }
    }
    s.j = std::move(cur.x);
    s.log_z = std::move(cur.log_z);
    s.marginals = std::move(cur.marginals);
    s.value = cur.f;
    return s.value;
}

void UpperBoundOptimizer::finish(State& s, BoundResult& out) const {
    out.bound = s.value;
    out.rho = s.rho;
    out.member_interactions = s.j;
    out.member_marginals = s.marginals;
    out.inner_iterations = s.inner_iterations;
    out.monotonicity_violations = s.violations;
    out.blended.assign(cover_.size(), 0.0);
    double residual = 0.0;
    for (std::size_t e = 0; e < cover_.size(); ++e) {
        double sum = 0.0, mass = 0.0, blend = 0.0;
        for (const auto& [r, k] : cover_[e]) {
            sum += s.rho[r] * s.j[r][k];
            mass += s.rho[r];
            blend += s.rho[r] * s.marginals[r][k];
        }
        residual = std::max(residual, std::abs(sum - s.target[e]));
        out.blended[e] = blend / mass;
    }
    out.constraint_residual = residual;
}

BoundResult UpperBoundOptimizer::minimize(const std::vector<double>& target) const {
    if (static_cast<int>(target.size()) != family_.apex_graph.edge_count())
        throw Error(ErrorCode::InvalidInput, "target interactions do not match the apex graph");
    for (std::size_t e = 0; e < cover_.size(); ++e)
        if (cover_[e].empty())
            throw Error(ErrorCode::CoverageError, "apex-graph edge " + std::to_string(e) + " is in no member");
    const int members = static_cast<int>(family_.members.size());
    State s;
    s.target = target;
    s.u.assign(members, 0.0);
    s.rho.assign(members, 1.0 / members);
    s.j.resize(members);
    for (int r = 0; r < members; ++r) s.j[r].assign(family_.members[r].edge_to_apex.size(), 0.0);
    for (std::size_t e = 0; e < cover_.size(); ++e) {
        double mass = 0.0;
        for (const auto& [r, k] : cover_[e]) mass += s.rho[r];
        for (const auto& [r, k] : cover_[e]) s.j[r][k] = target[e] / mass;
    }
    solve_inner(s);

    BoundResult out;
    bool outer_converged = true;
    if (options_.optimize_weights && members > 1) {
        auto softmax = [&](const std::vector<double>& u) {
            const double mx = *std::max_element(u.begin(), u.end());
            std::vector<double> rho(u.size());
            double z = 0.0;
            for (std::size_t r = 0; r < u.size(); ++r) z += rho[r] = std::exp(u[r] - mx);
            for (double& p : rho) p /= z;
            return rho;
        };
        auto outer_gradient = [&](const State& st) {
            std::vector<double> dr(members), du(members);
            double mean = 0.0;
            for (int r = 0; r < members; ++r) {
                dr[r] = st.log_z[r] - dot(st.marginals[r], st.j[r]);
                mean += st.rho[r] * dr[r];
            }
            for (int r = 0; r < members; ++r) du[r] = st.rho[r] * (dr[r] - mean);
            return du;
        };
        Lbfgs memory(options_.history);
        auto grad = outer_gradient(s);
        outer_converged = false;
        for (int it = 0; it < options_.max_outer; ++it) {
            if (inf_norm(grad) <= options_.tolerance) {
                outer_converged = true;
                break;
            }
            auto d = memory.direction(grad);
            double slope = dot(d, grad);
            if (!(slope < 0.0)) {
                memory.reset();
                d = grad;
                for (double& v : d) v = -v;
                slope = -dot(grad, grad);
            }
            double t = memory.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(grad, grad))) : 1.0;
            t = std::min(t, kMaxStep / inf_norm(d));
            bool accepted = false;
            State next;
            for (int ls = 0; ls < 6; ++ls) {
                next = s;
                for (int r = 0; r < members; ++r) next.u[r] = s.u[r] + t * d[r];
                next.rho = softmax(next.u);
                solve_inner(next);
                if (std::isfinite(next.value) && next.value <= s.value + 1e-4 * t * slope) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) break;
            ++out.outer_iterations;
            auto next_grad = outer_gradient(next);
            std::vector<double> sv(members), yv(members);
            for (int r = 0; r < members; ++r) {
                sv[r] = next.u[r] - s.u[r];
                yv[r] = next_grad[r] - grad[r];
            }
            memory.push(std::move(sv), std::move(yv));
            const double decrease = s.value - next.value;
            // keep the audit counters of rejected trials out of the accepted path
            next.inner_iterations = std::max(next.inner_iterations, s.inner_iterations);
            s = std::move(next);
            grad = std::move(next_grad);
            if (decrease <= 1e-13 * std::max(1.0, std::abs(s.value))) {
                outer_converged = inf_norm(grad) <= options_.tolerance;
                break;
            }
        }
    }
    finish(s, out);
    out.converged = s.inner_converged && outer_converged;
    return out;
}

BoundResult optimize_upper_bound(const SpanningFamily& family, const std::vector<double>& target,
                                 const OptimizerOptions& options) {
    return UpperBoundOptimizer(family, options).minimize(target);
}

ApproxMarginals approx_marginals(const ApexModel& apex, const BoundResult& result, int vertex) {
    const int h = static_cast<int>(std::lround(std::sqrt(static_cast<double>(apex.apex))));
    if (vertex < 0) vertex = (h / 2) * h + h / 2;
    auto checked = [](double m) {
        if (!(std::abs(m) <= 1.0 + 1e-9)) throw Error(ErrorCode::NumericalFailure, "edge expectation outside [-1, 1]");
        return 0.5 * m + 0.5;
    };
    ApproxMarginals out;
    out.vertex = vertex;
    for (int e = 0; e < apex.grid_edge_count; ++e) out.pairwise.push_back(checked(result.blended[e]));
    out.singleton = checked(result.blended[apex.apex_edge(vertex)]);
    return out;
}

// --- experiment --------------------------------------------------------------------

std::vector<ExperimentRow> run_varying_interaction(const ExperimentOptions& options) {
    std::vector<SpanningFamily> families;
    for (const auto& m : options.methods) {
        if (m == "psg") families.push_back(build_psg_family(options.h));
        else if (m == "dsg") families.push_back(build_dsg_family(options.h));
        else throw Error(ErrorCode::InvalidInput, "unknown method '" + m + "'");
    }
    std::vector<std::unique_ptr<UpperBoundOptimizer>> optimizers;
    for (const auto& f : families) optimizers.push_back(std::make_unique<UpperBoundOptimizer>(f, options.optimizer));

    const int tasks = static_cast<int>(options.alphas.size()) * options.trials;
    std::vector<std::vector<ExperimentRow>> results(tasks);
    const Rng base(options.seed);
    auto run_task = [&](int task) {
        const int ai = task / options.trials, trial = task % options.trials;
        const double alpha = options.alphas[ai];
        Rng rng = base.split(static_cast<std::uint64_t>(ai) * 1000003ULL + static_cast<std::uint64_t>(trial));
        const GridModel model = random_grid_model(options.h, alpha, rng);
        const GridExact exact = transfer_matrix_exact(model);
        const ApexModel apex = apexify(model);
        const int h = options.h;
        for (std::size_t mi = 0; mi < optimizers.size(); ++mi) {
            const auto start = std::chrono::steady_clock::now();
            const BoundResult res = optimizers[mi]->minimize(apex.interactions);
            const auto stop = std::chrono::steady_clock::now();
            const ApproxMarginals am = approx_marginals(apex, res);
            ExperimentRow row;
            row.alpha = alpha;
            row.trial = trial;
            row.method = options.methods[mi];
            row.h_bound = res.bound - std::log(2.0);
            row.logz_true = exact.log_z;
            row.err_logz_norm = (row.h_bound - exact.log_z) / (h * h);
            double err = 0.0;
            for (int e = 0; e < apex.grid_edge_count; ++e)
                err += std::abs(am.pairwise[e] - 0.5 * (1.0 + exact.edge_expectations[e]));
            row.err_pairwise = err / apex.grid_edge_count;
            row.err_singleton = std::abs(am.singleton - 0.5 * (1.0 + exact.vertex_expectations[am.vertex]));
            row.iters = res.outer_iterations;
            if (options.timing)
                row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
            row.constraint_residual = res.constraint_residual;
            row.monotonicity_violations = res.monotonicity_violations;
            results[task].push_back(std::move(row));
        }
    };

    const int jobs = std::max(1, std::min(options.jobs, tasks));
    if (jobs == 1) {
        for (int t = 0; t < tasks; ++t) run_task(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int t = next++; t < tasks; t = next++) run_task(t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    std::vector<ExperimentRow> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    return rows;
}

std::string experiment_csv_header() {
    return "alpha,trial,method,h_bound,logz_true,err_logz_norm,err_pairwise,err_singleton,iters,runtime_ms";
}

std::string experiment_csv_row(const ExperimentRow& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%g,%d,%s,%.12g,%.12g,%.12g,%.12g,%.12g,%d,%.3f", r.alpha, r.trial,
                  r.method.c_str(), r.h_bound, r.logz_true, r.err_logz_norm, r.err_pairwise, r.err_singleton, r.iters,
                  r.runtime_ms);
    return buf;
}

}  // namespace ising
