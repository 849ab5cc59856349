#pragma once

#include <cstddef>
#include <vector>

#include "mleak/dist.hpp"
#include "mleak/value.hpp"

namespace mleak {

// Joint pmf stored as a list of nonzero cells. For alphabets where the
// dense matrix would not fit (e.g. 2^16 inputs) but the support is thin.
struct SparseEntry {
  std::size_t x = 0, y = 0;
  double p = 0.0;
};

class SparseJoint {
 public:
  SparseJoint(std::size_t nx, std::size_t ny, std::vector<SparseEntry> entries, double tol = kNormTol);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }
  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;

 private:
  std::size_t nx_, ny_;
  std::vector<SparseEntry> entries_;
};

SparseJoint to_sparse(const JointPmf& j);
JointPmf to_dense(const SparseJoint& s);

LeakageValue maximal_leakage(const SparseJoint& s, double tau = kSupportTol);
double mutual_information(const SparseJoint& s);

}  // namespace mleak
