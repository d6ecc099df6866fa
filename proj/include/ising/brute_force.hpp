#pragma once

#include <cstdint>
#include <vector>

#include "ising/model.hpp"
#include "ising/rng.hpp"

namespace ising {

inline constexpr int kDefaultEnumerationLimit = 20;

// Exhaustive oracles. The limit bounds the number of unconditioned spins;
// TooLarge is raised beyond it.
double brute_force_log_z(const IsingModel& m, const Condition& s = {}, int limit = kDefaultEnumerationLimit);

SpinConfiguration brute_force_sample(const IsingModel& m, const Condition& s, Rng& rng,
                                     int limit = kDefaultEnumerationLimit);

struct Marginals {
    std::vector<double> edge;    // E[x_u x_v] per edge id
    std::vector<double> vertex;  // E[x_v]
};

Marginals brute_force_marginals(const IsingModel& m, int limit = kDefaultEnumerationLimit);

// Configuration codes: bit v set <=> x_v = -1.
std::uint64_t encode_configuration(const SpinConfiguration& x);
SpinConfiguration decode_configuration(std::uint64_t code, int n);

// log P(x) for every code 0 .. 2^n - 1.
std::vector<double> brute_force_log_probabilities(const IsingModel& m, int limit = kDefaultEnumerationLimit);

// One enumeration bucketed by the spins on `keys`: pattern bit i set <=>
// keys[i] = -1. Empty buckets never occur (every pattern is realisable).
struct PatternTable {
    std::vector<double> log_z;                            // per pattern
    std::vector<std::vector<double>> edge_expectations;   // per pattern, per edge (optional)
};

PatternTable enumerate_patterns(const IsingModel& m, const std::vector<int>& keys, bool with_edges,
                                int limit = kDefaultEnumerationLimit);

}  // namespace ising
