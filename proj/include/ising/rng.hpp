#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace ising {

// Seedable, splittable generator. Streams derived with split() are
// independent of the parent's consumption state.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return engine_(); }
    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int spin() { return (engine_() >> 63) ? 1 : -1; }

    Rng split(std::uint64_t stream) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ising
