#pragma once

#include <string>

#include "mleak/dist.hpp"
#include "mleak/value.hpp"

namespace mleak {

struct DistortionSpec {
  Matrix d;            // |X| x |Y|, entries >= 0
  double level = 0.0;  // D

  static DistortionSpec hamming(std::size_t n, double level);
  void validate() const;
  double d_min() const;  // max_x min_y d(x,y)
  double d_max() const;
  // Smallest achievable expected distortion under px.
  double expected_min(const Pmf& px) const;
};

struct MechanismSolution {
  Channel channel;
  LeakageValue leakage;
  double distortion = 0.0;
  std::string certificate;  // "closed-form" or "lp-dual"
  double lower_bound = 0.0;  // on exp(L), from the dual
  double gap = 0.0;          // exp(L) - lower_bound
  bool certified = true;
};

// P_X(1) = p, rows ordered x=0, x=1.
MechanismSolution min_leakage_hamming_binary(double p, double level);
MechanismSolution min_leakage_general(const Pmf& px, const DistortionSpec& spec, double tol = 1e-7);

struct MemorylessGap {
  LeakageValue bound;           // 1 - D/p bits
  LeakageValue optimal_scheme;  // H(p) - H(D) bits
};
MemorylessGap memoryless_lower_bound_hamming(double p, double level);
LeakageValue per_letter_memoryless_optimum(double p, double level);

double binary_entropy_bits(double p);

}  // namespace mleak
