#include "ising/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ising/brute_force.hpp"
#include "ising/error.hpp"
#include "ising/planarity.hpp"

namespace ising {

struct DecompositionEngine::NodePlan {
    int id = 0;
    NodeEngine engine = NodeEngine::BruteForce;
    Graph local;
    std::vector<int> to_host;
    std::vector<int> navel;      // local ids
    std::vector<int> host_edge;  // per local edge
    std::vector<int> children;
    std::vector<int> child_navel_size;
    std::vector<std::array<int, 3>> carriers;  // local edges (k0k1, k0k2, k1k2), -1 when unused
    std::unique_ptr<PlanarIsingSolver> free_solver;
    std::unique_ptr<ConditionedPlanarSolver> conditioned_solver;
};

namespace {

std::vector<int> pattern_spins(std::size_t pattern, std::size_t k) {
    std::vector<int> spins(k);
    for (std::size_t i = 0; i < k; ++i) spins[i] = (pattern >> i) & 1 ? -1 : 1;
    return spins;
}

void check_symmetry(const std::vector<double>& table, int node) {
    const std::size_t full = table.size() - 1;
    for (std::size_t p = 0; p < table.size(); ++p) {
        const double a = table[p], b = table[p ^ full];
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
            throw Error(ErrorCode::InternalError,
                        "flip symmetry violated in the table of node " + std::to_string(node));
    }
}

}  // namespace

DecompositionEngine::DecompositionEngine(const Graph& g, DecompositionTree tree, EngineOptions options)
    : graph_(g), tree_(std::move(tree)), options_(options) {
    for (auto& node : tree_.nodes) {
        std::sort(node.vertices.begin(), node.vertices.end());
        for (auto& [u, v] : node.edges)
            if (u > v) std::swap(u, v);
    }
    const auto report = validate(tree_, graph_);
    if (!report.ok()) throw Error(ErrorCode::InvalidDecomposition, report.summary());

    const auto order = tree_.preorder();
    postorder_.assign(order.rbegin(), order.rend());
    const auto kids = tree_.children();
    plans_.resize(tree_.nodes.size());
    for (const auto& node : tree_.nodes) {
        auto plan = std::make_unique<NodePlan>();
        plan->id = node.id;
        plan->to_host = node.vertices;
        plan->local = Graph(static_cast<int>(node.vertices.size()));
        auto local = [&](int v) {
            return static_cast<int>(std::lower_bound(node.vertices.begin(), node.vertices.end(), v) -
                                    node.vertices.begin());
        };
        std::vector<std::pair<int, int>> owned;  // (host edge, local edge) sorted by host id
        for (const auto& [u, v] : node.edges) owned.push_back({*graph_.find_edge(u, v), 0});
        std::sort(owned.begin(), owned.end());
        for (auto& [host, le] : owned) {
            le = plan->local.add_edge(local(graph_.edge(host).u), local(graph_.edge(host).v));
            plan->host_edge.push_back(host);
        }
        auto ensure_edge = [&](int a, int b) {
            if (auto e = plan->local.find_edge(a, b)) return *e;
            plan->host_edge.push_back(-1);
            return plan->local.add_edge(a, b);
        };
        for (int v : tree_.navel(node.id)) plan->navel.push_back(local(v));
        // connectors keep the navel connected for contraction
        for (std::size_t i = 0; i < plan->navel.size(); ++i)
            for (std::size_t k = i + 1; k < plan->navel.size(); ++k) ensure_edge(plan->navel[i], plan->navel[k]);
        for (int c : kids[node.id]) {
            const auto cn = tree_.navel(c);
            std::array<int, 3> carrier{-1, -1, -1};
            if (cn.size() >= 2) carrier[0] = ensure_edge(local(cn[0]), local(cn[1]));
            if (cn.size() == 3) {
                carrier[1] = ensure_edge(local(cn[0]), local(cn[2]));
                carrier[2] = ensure_edge(local(cn[1]), local(cn[2]));
            }
            plan->children.push_back(c);
            plan->child_navel_size.push_back(static_cast<int>(cn.size()));
            plan->carriers.push_back(carrier);
        }

        const int size = plan->local.vertex_count();
        const bool small = size <= tree_.c && size <= kDefaultEnumerationLimit;
        const bool use_planar = !small || (options_.prefer_planar && is_planar(plan->local));
        if (use_planar) {
            plan->engine = NodeEngine::Planar;
            if (plan->navel.empty())
                plan->free_solver = std::make_unique<PlanarIsingSolver>(plan->local);
            else
                plan->conditioned_solver = std::make_unique<ConditionedPlanarSolver>(plan->local, plan->navel);
        }
        plans_[node.id] = std::move(plan);
    }
}

DecompositionEngine::~DecompositionEngine() = default;
DecompositionEngine::DecompositionEngine(DecompositionEngine&&) noexcept = default;
DecompositionEngine& DecompositionEngine::operator=(DecompositionEngine&&) noexcept = default;

NodeEngine DecompositionEngine::node_engine(int t) const { return plans_.at(t)->engine; }

InferenceCache DecompositionEngine::infer(const std::vector<double>& j, bool with_expectations) const {
    if (static_cast<int>(j.size()) != graph_.edge_count())
        throw Error(ErrorCode::InvalidInput, "interaction vector does not match the graph");
    InferenceCache cache;
    cache.components.resize(plans_.size());
    for (int t : postorder_) {
        const NodePlan& plan = *plans_[t];
        auto& comp = cache.components[t];
        comp.node = t;
        comp.to_host = plan.to_host;
        comp.navel = plan.navel;
        comp.host_edge = plan.host_edge;
        std::vector<double> jl(plan.local.edge_count(), 0.0);
        for (int e = 0; e < plan.local.edge_count(); ++e)
            if (plan.host_edge[e] >= 0) jl[e] = j[plan.host_edge[e]];

        double log_m = 0.0;
        for (std::size_t i = 0; i < plan.children.size(); ++i) {
            const auto& table = cache.components[plan.children[i]].log_z_table;
            ChildCoefficients coef;
            coef.child = plan.children[i];
            coef.navel_size = plan.child_navel_size[i];
            switch (coef.navel_size) {
                case 0:
                case 1:
                    log_m += table[0];
                    break;
                case 2:
                    coef.a = 0.5 * (table[0] + table[2]);
                    coef.b = 0.5 * (table[0] - table[2]);
                    break;
                case 3: {
                    // patterns (+++), (++-), (+-+), (+--)
                    const double l0 = table[0], l1 = table[4], l2 = table[2], l3 = table[6];
                    coef.a = 0.25 * (l0 + l1 + l2 + l3);
                    coef.b = 0.25 * (l0 + l1 - l2 - l3);
                    coef.c = 0.25 * (l0 - l1 + l2 - l3);
                    coef.d = 0.25 * (l0 - l1 - l2 + l3);
                    break;
                }
                default:
                    throw Error(ErrorCode::InternalError, "navel larger than 3");
            }
            if (coef.navel_size >= 2) {
                log_m += coef.a;
                jl[plan.carriers[i][0]] += coef.b;
            }
            if (coef.navel_size == 3) {
                jl[plan.carriers[i][1]] += coef.c;
                jl[plan.carriers[i][2]] += coef.d;
            }
            comp.children.push_back(coef);
        }
        comp.log_m = log_m;

        const std::size_t k = plan.navel.size();
        const std::size_t patterns = std::size_t{1} << k;
        comp.log_z_table.assign(patterns, 0.0);
        if (plan.engine == NodeEngine::BruteForce) {
            comp.model = IsingModel(plan.local, jl);
            auto table = enumerate_patterns(comp.model, plan.navel, with_expectations);
            if (options_.verify_symmetry) check_symmetry(table.log_z, t);
            for (std::size_t p = 0; p < patterns; ++p) comp.log_z_table[p] = log_m + table.log_z[p];
            if (with_expectations) comp.conditional_expectations = std::move(table.edge_expectations);
        } else {
            if (with_expectations) comp.conditional_expectations.assign(patterns, {});
            const std::size_t full = patterns - 1;
            for (std::size_t p = 0; p < patterns; p += 2) {  // navel[0] = +1; the rest by symmetry
                double value;
                std::vector<double> expectations;
                if (k == 0) {
                    if (with_expectations) {
                        auto ev = plan.free_solver->evaluate(jl);
                        value = ev.log_z;
                        expectations = std::move(ev.marginals);
                    } else {
                        value = plan.free_solver->log_z(jl);
                    }
                } else {
                    const auto spins = pattern_spins(p, k);
                    if (with_expectations) {
                        auto ev = plan.conditioned_solver->evaluate(jl, spins);
                        value = ev.log_z;
                        expectations = std::move(ev.marginals);
                    } else {
                        value = plan.conditioned_solver->log_z(jl, spins);
                    }
                }
                comp.log_z_table[p] = log_m + value;
                comp.log_z_table[p ^ full] = log_m + value;
                if (with_expectations) {
                    comp.conditional_expectations[p ^ full] = expectations;
                    comp.conditional_expectations[p] = std::move(expectations);
                }
            }
            comp.model = IsingModel(plan.local, std::move(jl));
        }
    }
    cache.log_z = cache.components[tree_.root].log_z_table[0];
    return cache;
}

std::vector<std::vector<double>> DecompositionEngine::conditional_expectations(
    const NodePlan& plan, const EffectiveComponentModel& comp) const {
    if (!comp.conditional_expectations.empty()) return comp.conditional_expectations;
    const std::size_t k = plan.navel.size();
    const std::size_t patterns = std::size_t{1} << k;
    if (plan.engine == NodeEngine::BruteForce)
        return enumerate_patterns(comp.model, plan.navel, true).edge_expectations;
    std::vector<std::vector<double>> out(patterns);
    const std::size_t full = patterns - 1;
    for (std::size_t p = 0; p < patterns; p += 2) {
        auto m = k == 0 ? plan.free_solver->evaluate(comp.model.interactions).marginals
                        : plan.conditioned_solver->evaluate(comp.model.interactions, pattern_spins(p, k)).marginals;
        out[p ^ full] = m;
        out[p] = std::move(m);
    }
    return out;
}

std::vector<double> DecompositionEngine::edge_marginals(const InferenceCache& cache) const {
    std::vector<double> result(graph_.edge_count(), 0.0);
    // navel pattern distribution per node, filled top-down
    std::vector<std::vector<double>> navel_prob(plans_.size());
    navel_prob[tree_.root] = {1.0};
    for (int t : tree_.preorder()) {
        const NodePlan& plan = *plans_[t];
        const auto& comp = cache.components[t];
        const auto cond = conditional_expectations(plan, comp);
        const auto& prob = navel_prob[t];
        std::vector<double> full(plan.local.edge_count(), 0.0);
        for (std::size_t p = 0; p < prob.size(); ++p)
            for (int e = 0; e < plan.local.edge_count(); ++e) full[e] += prob[p] * cond[p][e];
        for (int e = 0; e < plan.local.edge_count(); ++e) {
            full[e] = std::clamp(full[e], -1.0, 1.0);
            if (plan.host_edge[e] >= 0) result[plan.host_edge[e]] = full[e];
        }
        for (std::size_t i = 0; i < plan.children.size(); ++i) {
            auto& child = navel_prob[plan.children[i]];
            const auto& car = plan.carriers[i];
            switch (plan.child_navel_size[i]) {
                case 0:
                    child = {1.0};
                    break;
                case 1:
                    child = {0.5, 0.5};
                    break;
                case 2: {
                    const double e01 = full[car[0]];
                    child = {(1 + e01) / 4, (1 - e01) / 4, (1 - e01) / 4, (1 + e01) / 4};
                    break;
                }
                default: {
                    const double e01 = full[car[0]], e02 = full[car[1]], e12 = full[car[2]];
                    child.assign(8, 0.0);
                    for (std::size_t p = 0; p < 8; ++p) {
                        const auto y = pattern_spins(p, 3);
                        child[p] = std::max(0.0, (1 + y[0] * y[1] * e01 + y[0] * y[2] * e02 + y[1] * y[2] * e12) / 8);
                    }
                }
            }
        }
    }
    return result;
}

DecompositionEngine::Evaluation DecompositionEngine::evaluate(const std::vector<double>& j) const {
    auto cache = infer(j, true);
    return {cache.log_z, edge_marginals(cache)};
}

// --- sampling ---------------------------------------------------------------

struct DecompositionSampler::NodeSampler {
    // brute-force nodes: per navel pattern, cumulative probabilities of the
    // matching configuration codes
    std::vector<std::vector<double>> cdf;
    std::vector<std::vector<std::uint64_t>> codes;
    std::unique_ptr<PlanarSampler> planar;
};

DecompositionSampler::DecompositionSampler(const DecompositionEngine& engine, InferenceCache cache)
    : engine_(engine), cache_(std::move(cache)), preorder_(engine.tree().preorder()) {
    samplers_.resize(engine_.plans_.size());
    for (std::size_t t = 0; t < samplers_.size(); ++t) {
        const auto& plan = *engine_.plans_[t];
        const auto& comp = cache_.components[t];
        auto s = std::make_unique<NodeSampler>();
        if (plan.engine == NodeEngine::BruteForce) {
            const std::size_t patterns = std::size_t{1} << plan.navel.size();
            s->cdf.resize(patterns);
            s->codes.resize(patterns);
            const auto logp = brute_force_log_probabilities(comp.model);
            for (std::uint64_t code = 0; code < logp.size(); ++code) {
                std::size_t p = 0;
                for (std::size_t i = 0; i < plan.navel.size(); ++i)
                    if ((code >> plan.navel[i]) & 1) p |= std::size_t{1} << i;
                const double w = std::exp(logp[code]);
                auto& c = s->cdf[p];
                c.push_back((c.empty() ? 0.0 : c.back()) + w);
                s->codes[p].push_back(code);
            }
        } else {
            s->planar = std::make_unique<PlanarSampler>(plan.local, plan.navel);
        }
        samplers_[t] = std::move(s);
    }
}

DecompositionSampler::~DecompositionSampler() = default;

SpinConfiguration DecompositionSampler::draw(Rng& rng) const {
    SpinConfiguration x(engine_.graph().vertex_count(), 0);
    for (int t : preorder_) {
        const auto& plan = *engine_.plans_[t];
        const auto& comp = cache_.components[t];
        const auto& s = *samplers_[t];
        std::vector<int> spins(plan.navel.size());
        std::size_t pattern = 0;
        for (std::size_t i = 0; i < plan.navel.size(); ++i) {
            spins[i] = x[plan.to_host[plan.navel[i]]];
            if (spins[i] == 0) throw Error(ErrorCode::InternalError, "navel spin not assigned before its node");
            if (spins[i] < 0) pattern |= std::size_t{1} << i;
        }
        SpinConfiguration local;
        if (plan.engine == NodeEngine::BruteForce) {
            const auto& cdf = s.cdf[pattern];
            const double u = rng.uniform() * cdf.back();
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            if (it == cdf.end()) --it;
            local = decode_configuration(s.codes[pattern][it - cdf.begin()], plan.local.vertex_count());
        } else {
            local = s.planar->sample(comp.model.interactions, spins, rng);
        }
        for (std::size_t v = 0; v < local.size(); ++v) {
            int& slot = x[plan.to_host[v]];
            if (slot != 0 && slot != local[v])
                throw Error(ErrorCode::InternalError, "navel spins disagree between a node and its parent");
            slot = local[v];
        }
    }
    return x;
}

// --- model-level entry points -------------------------------------------------

namespace {

void require_zero_field(const IsingModel& m) {
    m.check();
    if (!m.zero_field()) throw Error(ErrorCode::NotZeroField, "decomposition inference requires zero field");
}

}  // namespace

double infer_log_z(const DecompositionTree& tree, const IsingModel& m) {
    require_zero_field(m);
    return DecompositionEngine(m.graph, tree).infer(m.interactions).log_z;
}

std::vector<double> edge_marginals(const DecompositionTree& tree, const IsingModel& m) {
    require_zero_field(m);
    return DecompositionEngine(m.graph, tree).evaluate(m.interactions).marginals;
}

SpinConfiguration sample(const DecompositionTree& tree, const IsingModel& m, Rng& rng) {
    return sample(tree, m, 1, rng).front();
}

std::vector<SpinConfiguration> sample(const DecompositionTree& tree, const IsingModel& m, int count, Rng& rng) {
    require_zero_field(m);
    DecompositionEngine engine(m.graph, tree);
    DecompositionSampler sampler(engine, engine.infer(m.interactions));
    std::vector<SpinConfiguration> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sampler.draw(rng));
    return out;
}

}  // namespace ising
