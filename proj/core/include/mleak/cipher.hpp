#pragma once

#include <cstdint>
#include <vector>

#include "mleak/dist.hpp"
#include "mleak/mechanism.hpp"
#include "mleak/types.hpp"
#include "mleak/value.hpp"

namespace mleak {

struct CipherParams {
  unsigned n = 8;
  Pmf source;
  DistortionSpec spec;  // spec.level is the per-letter distortion D
  double key_rate_bits = 0.0;
  double alpha_bits = 0.0;
  double delta_bits = 0.05;
  double budget_slack_bits = 0.1;  // codebook budget 2^{n(R+slack)}
  int candidates = 24;
  int retries = 4;
  std::uint64_t seed = 1;
  std::uint64_t cap = std::uint64_t{1} << 20;  // max |X|^n
};

struct Message {
  bool dummy = false;
  std::uint32_t type = 0;
  std::uint32_t bin = 0;
  std::uint32_t masked = 0;
  auto operator<=>(const Message&) const = default;
};

class CipherScheme {
 public:
  // Greedy type covering, then binning. Throws SizeCapExceeded / CoverageFailure.
  static CipherScheme build(const CipherParams& params);
  // Rebuilds index maps from stored codebooks; throws CoverageFailure if one is incomplete.
  static CipherScheme from_codebooks(const CipherParams& params, std::vector<std::vector<std::uint64_t>> codebooks);

  const CipherParams& params() const { return params_; }
  unsigned key_bits() const { return key_bits_; }
  std::uint64_t bin_size() const { return std::uint64_t{1} << key_bits_; }
  const std::vector<TypeClass>& types() const { return types_; }
  bool feasible(std::size_t t) const { return feasible_[t]; }
  const std::vector<std::uint64_t>& codebook(std::size_t t) const { return codebooks_[t]; }
  std::size_t bins(std::size_t t) const;
  // Key bits used by bin i of type t.
  unsigned bin_key_bits(std::size_t t, std::size_t i) const;
  std::uint64_t num_sequences() const { return num_x_; }
  std::size_t type_of(std::uint64_t x) const { return type_of_.at(x); }
  int attempts() const { return attempts_; }

  Message encode(std::uint64_t x, std::uint64_t key) const;
  // The dummy message decodes to dummy_output().
  std::uint64_t decode(const Message& m, std::uint64_t key) const;
  // Constant reproduction y* ... y* with y* minimizing max_x d(x, y*).
  std::uint64_t dummy_output() const;
  // Codeword assigned to x (feasible types only).
  std::uint64_t codeword_of(std::uint64_t x) const;
  double sequence_distortion(std::uint64_t x, std::uint64_t y) const;  // per letter

 private:
  CipherScheme() = default;
  void index_types();
  void assign_from_codebooks();

  CipherParams params_;
  unsigned key_bits_ = 0;
  std::uint64_t num_x_ = 0;
  std::vector<TypeClass> types_;
  std::vector<bool> feasible_;
  std::vector<std::vector<std::uint64_t>> codebooks_;
  std::vector<std::uint32_t> type_of_;
  std::vector<std::int64_t> slot_of_;  // codeword position within its type, -1 if infeasible
  int attempts_ = 1;
};

LeakageValue exact_scheme_leakage(const CipherScheme& s);
// Sum over messages of max_x P(m|x) with the key marginalized; small n only.
LeakageValue brute_force_scheme_leakage(const CipherScheme& s);
// Exact P(d(X^n, decode(encode(X^n))) > D); only dummy-mapped sequences can contribute.
double excess_distortion_prob(const CipherScheme& s);

}  // namespace mleak
