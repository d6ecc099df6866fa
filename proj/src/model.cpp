#include "ising/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ising/error.hpp"

namespace ising {

std::vector<int> Condition::vertices() const {
    std::vector<int> out;
    out.reserve(assignments.size());
    for (const auto& a : assignments) out.push_back(a.vertex);
    return out;
}

Condition Condition::flipped() const {
    Condition c = *this;
    for (auto& a : c.assignments) a.spin = -a.spin;
    return c;
}

IsingModel::IsingModel(Graph g, std::vector<double> j, std::optional<std::vector<double>> mu)
    : graph(std::move(g)), interactions(std::move(j)), fields(std::move(mu)) {
    check();
}

bool IsingModel::zero_field() const {
    if (!fields) return true;
    for (double f : *fields)
        if (f != 0.0) return false;
    return true;
}

void IsingModel::check() const {
    if (static_cast<int>(interactions.size()) != graph.edge_count())
        throw Error(ErrorCode::InvalidInput, "interaction count " + std::to_string(interactions.size()) +
                                                 " does not match edge count " +
                                                 std::to_string(graph.edge_count()));
    if (fields && static_cast<int>(fields->size()) != graph.vertex_count())
        throw Error(ErrorCode::InvalidInput, "field count does not match vertex count");
    for (double j : interactions)
        if (!std::isfinite(j)) throw Error(ErrorCode::InvalidInput, "non-finite interaction");
    if (fields)
        for (double f : *fields)
            if (!std::isfinite(f)) throw Error(ErrorCode::InvalidInput, "non-finite field");
}

void check_condition(const Condition& s, int vertex_count) {
    std::vector<char> seen(vertex_count, 0);
    for (const auto& a : s.assignments) {
        if (a.vertex < 0 || a.vertex >= vertex_count)
            throw Error(ErrorCode::InvalidInput, "condition vertex " + std::to_string(a.vertex) + " out of range");
        if (a.spin != 1 && a.spin != -1)
            throw Error(ErrorCode::InvalidInput, "condition spin must be +1 or -1");
        if (seen[a.vertex]) throw Error(ErrorCode::InvalidInput, "vertex conditioned twice");
        seen[a.vertex] = 1;
    }
}

double log_weight(const IsingModel& m, const SpinConfiguration& x) {
    if (static_cast<int>(x.size()) != m.vertex_count())
        throw Error(ErrorCode::InvalidInput, "configuration size does not match the model");
    double w = 0.0;
    const auto& edges = m.graph.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) w += m.interactions[e] * x[edges[e].u] * x[edges[e].v];
    if (m.fields)
        for (std::size_t v = 0; v < x.size(); ++v) w += (*m.fields)[v] * x[v];
    return w;
}

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

}  // namespace ising
