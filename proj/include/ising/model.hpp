#pragma once

#include <optional>
#include <vector>

#include "ising/graph.hpp"

namespace ising {

using SpinConfiguration = std::vector<int>;  // entries +1 / -1

struct SpinAssignment {
    int vertex;
    int spin;
};

// Spins fixed on a vertex subset.
struct Condition {
    std::vector<SpinAssignment> assignments;

    std::size_t size() const { return assignments.size(); }
    bool empty() const { return assignments.empty(); }
    std::vector<int> vertices() const;
    Condition flipped() const;
};

struct IsingModel {
    Graph graph;
    std::vector<double> interactions;          // indexed by edge id
    std::optional<std::vector<double>> fields;  // absent means zero field

    IsingModel() = default;
    IsingModel(Graph g, std::vector<double> j, std::optional<std::vector<double>> mu = std::nullopt);

    int vertex_count() const { return graph.vertex_count(); }
    bool zero_field() const;
    // Throws InvalidInput when array sizes disagree with the graph.
    void check() const;
};

// Throws InvalidInput on out-of-range vertices, duplicates or spins other than +1/-1.
void check_condition(const Condition& s, int vertex_count);

double log_weight(const IsingModel& m, const SpinConfiguration& x);

// Numerically stable log(exp(a) + exp(b)).
double log_add(double a, double b);

}  // namespace ising
