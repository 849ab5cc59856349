#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "mleak/dist.hpp"
#include "mleak/oracle.hpp"

namespace mleak {

using Rng = std::mt19937_64;

// splitmix64 finalizer over (seed, stream); independent streams per trial.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) { return Rng(derive_seed(seed, stream)); }

double uniform01(Rng& rng);
std::vector<double> dirichlet_ones(Rng& rng, std::size_t n);

// zero_prob: chance that each entry is forced to zero (one entry always kept).
Pmf random_pmf(Rng& rng, std::size_t n, double zero_prob = 0.0);
Channel random_channel(Rng& rng, std::size_t nx, std::size_t ny, double zero_prob = 0.0);
JointPmf random_joint(Rng& rng, std::size_t nx, std::size_t ny, double zero_prob = 0.0);
AuxChannel random_aux(Rng& rng, std::size_t nu, std::size_t nx, double zero_prob = 0.0);

}  // namespace mleak
