#include "ising/brute_force.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "ising/error.hpp"

namespace ising {

namespace {

struct LogSumExp {
    double max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;

    void add(double w) {
        if (w <= max) {
            sum += std::exp(w - max);
        } else {
            sum = sum * std::exp(max - w) + 1.0;
            max = w;
        }
    }
    double value() const { return max + std::log(sum); }
};

double local_field(const IsingModel& m, const SpinConfiguration& x, int v) {
    double h = m.fields ? (*m.fields)[v] : 0.0;
    for (const auto& inc : m.graph.incident(v)) h += m.interactions[inc.edge] * x[inc.neighbor];
    return h;
}

// Calls f(x, log_weight) for every completion of `x` over `free`, in Gray
// code order. The running weight is refreshed periodically to keep
// rounding from accumulating.
template <class F>
void for_each_configuration(const IsingModel& m, const std::vector<int>& free, SpinConfiguration x, F&& f) {
    const int k = static_cast<int>(free.size());
    double w = log_weight(m, x);
    f(x, w);
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int v = free[std::countr_zero(i)];
        w -= 2.0 * x[v] * local_field(m, x, v);
        x[v] = -x[v];
        if ((i & 1023u) == 0) w = log_weight(m, x);
        f(x, w);
    }
}

void check_size(int free_count, int limit) {
    if (free_count > limit || free_count > 62)
        throw Error(ErrorCode::TooLarge, "enumeration over " + std::to_string(free_count) +
                                             " spins exceeds the limit of " + std::to_string(limit));
}

// Splits the vertices into fixed (from s) and free; returns the starting
// configuration with free spins at +1.
SpinConfiguration start_configuration(const IsingModel& m, const Condition& s, std::vector<int>& free) {
    check_condition(s, m.vertex_count());
    SpinConfiguration x(m.vertex_count(), 1);
    std::vector<char> fixed(m.vertex_count(), 0);
    for (const auto& a : s.assignments) {
        x[a.vertex] = a.spin;
        fixed[a.vertex] = 1;
    }
    free.clear();
    for (int v = 0; v < m.vertex_count(); ++v)
        if (!fixed[v]) free.push_back(v);
    return x;
}

}  // namespace

double brute_force_log_z(const IsingModel& m, const Condition& s, int limit) {
    m.check();
    std::vector<int> free;
    SpinConfiguration x = start_configuration(m, s, free);
    check_size(static_cast<int>(free.size()), limit);
    LogSumExp acc;
    for_each_configuration(m, free, x, [&](const SpinConfiguration&, double w) { acc.add(w); });
    return acc.value();
}

SpinConfiguration brute_force_sample(const IsingModel& m, const Condition& s, Rng& rng, int limit) {
    m.check();
    std::vector<int> free;
    SpinConfiguration x = start_configuration(m, s, free);
    check_size(static_cast<int>(free.size()), limit);
    std::vector<double> weights;
    weights.reserve(std::size_t{1} << free.size());
    LogSumExp acc;
    for_each_configuration(m, free, x, [&](const SpinConfiguration&, double w) {
        weights.push_back(w);
        acc.add(w);
    });
    const double log_z = acc.value();
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t chosen = weights.size() - 1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cumulative += std::exp(weights[i] - log_z);
        if (u < cumulative) {
            chosen = i;
            break;
        }
    }
    // Replay the Gray code walk up to the chosen index.
    const std::uint64_t gray = chosen ^ (chosen >> 1);
    for (std::size_t b = 0; b < free.size(); ++b)
        if ((gray >> b) & 1u) x[free[b]] = -1;
    return x;
}

Marginals brute_force_marginals(const IsingModel& m, int limit) {
    m.check();
    const int n = m.vertex_count();
    check_size(n, limit);
    std::vector<int> free;
    SpinConfiguration x = start_configuration(m, {}, free);
    LogSumExp acc;
    for_each_configuration(m, free, x, [&](const SpinConfiguration&, double w) { acc.add(w); });
    const double log_z = acc.value();
    Marginals out;
    out.edge.assign(m.graph.edge_count(), 0.0);
    out.vertex.assign(n, 0.0);
    const auto& edges = m.graph.edges();
    for_each_configuration(m, free, x, [&](const SpinConfiguration& y, double w) {
        const double p = std::exp(w - log_z);
        for (std::size_t e = 0; e < edges.size(); ++e) out.edge[e] += p * y[edges[e].u] * y[edges[e].v];
        for (int v = 0; v < n; ++v) out.vertex[v] += p * y[v];
    });
    return out;
}

std::uint64_t encode_configuration(const SpinConfiguration& x) {
    std::uint64_t code = 0;
    for (std::size_t v = 0; v < x.size(); ++v)
        if (x[v] < 0) code |= std::uint64_t{1} << v;
    return code;
}

SpinConfiguration decode_configuration(std::uint64_t code, int n) {
    SpinConfiguration x(n, 1);
    for (int v = 0; v < n; ++v)
        if ((code >> v) & 1u) x[v] = -1;
    return x;
}

std::vector<double> brute_force_log_probabilities(const IsingModel& m, int limit) {
    m.check();
    const int n = m.vertex_count();
    check_size(n, limit);
    std::vector<double> out(std::size_t{1} << n);
    std::vector<int> free;
    SpinConfiguration x = start_configuration(m, {}, free);
    LogSumExp acc;
    for_each_configuration(m, free, x, [&](const SpinConfiguration& y, double w) {
        out[encode_configuration(y)] = w;
        acc.add(w);
    });
    const double log_z = acc.value();
    for (double& v : out) v -= log_z;
    return out;
}

PatternTable enumerate_patterns(const IsingModel& m, const std::vector<int>& keys, bool with_edges, int limit) {
    m.check();
    const int n = m.vertex_count();
    check_size(n, limit);
    const std::size_t patterns = std::size_t{1} << keys.size();
    auto pattern_of = [&](const SpinConfiguration& y) {
        std::size_t p = 0;
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (y[keys[i]] < 0) p |= std::size_t{1} << i;
        return p;
    };
    std::vector<int> free;
    SpinConfiguration x = start_configuration(m, {}, free);
    std::vector<LogSumExp> acc(patterns);
    for_each_configuration(m, free, x, [&](const SpinConfiguration& y, double w) { acc[pattern_of(y)].add(w); });
    PatternTable table;
    table.log_z.resize(patterns);
    for (std::size_t p = 0; p < patterns; ++p) table.log_z[p] = acc[p].value();
    if (with_edges) {
        const auto& edges = m.graph.edges();
        table.edge_expectations.assign(patterns, std::vector<double>(edges.size(), 0.0));
        for_each_configuration(m, free, x, [&](const SpinConfiguration& y, double w) {
            const std::size_t p = pattern_of(y);
            const double prob = std::exp(w - table.log_z[p]);
            auto& row = table.edge_expectations[p];
            for (std::size_t e = 0; e < edges.size(); ++e) row[e] += prob * y[edges[e].u] * y[edges[e].v];
        });
    }
    return table;
}

}  // namespace ising
