#pragma once

#include <cstdint>
#include <vector>

#include "mleak/dist.hpp"

namespace mleak {

struct TypeClass {
  std::vector<unsigned> counts;  // sum to n
  std::vector<double> q;         // counts / n
  std::uint64_t size = 0;        // multinomial coefficient, 0 if it overflows
  double log_size = 0.0;         // natural log of the class size
  double prob = 0.0;             // P^n(T_Q)
  double kl = 0.0;               // D(Q||P), nats
};

// All compositions of n into k parts, lexicographic in the counts.
std::vector<std::vector<unsigned>> enumerate_compositions(unsigned n, std::size_t k);
TypeClass make_type(const std::vector<unsigned>& counts, const Pmf& p);
std::vector<TypeClass> enumerate_types(unsigned n, const Pmf& p);

// Composition of a sequence stored as base-|X| digits, least significant first.
std::vector<unsigned> composition_of(std::uint64_t index, unsigned n, std::size_t k);

}  // namespace mleak
