#pragma once

#include <cstdint>
#include <random>

namespace apu {

using Rng = std::mt19937_64;

/// Independent concerns each get their own generator so that enabling one
/// perturbation never shifts the draws of another.
enum class StreamId : std::uint64_t {
    Mobility = 1,
    Traffic = 2,
    RadioLoss = 3,
    Localization = 4,
    Oracle = 5,
};

/// Deterministic generator for (master seed, concern, sub-index).
Rng make_stream(std::uint64_t master_seed, StreamId stream, std::uint64_t index = 0);

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool bernoulli(Rng& rng, double p)
{
    return std::bernoulli_distribution(p)(rng);
}

}  // namespace apu
