#pragma once

#include <vector>

#include "mleak/dist.hpp"

namespace mleak {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

// Dense two-phase simplex with Bland's rule.
// max c'x s.t. A x <= b, x >= 0.
LpResult solve_lp(const Matrix& a, const std::vector<double>& b, const std::vector<double>& c, double eps = 1e-9);

struct CertifiedLp {
  LpResult primal;
  LpResult dual;     // multipliers for the rows of A
  double bound = 0.0;  // b'y, an upper bound on the primal optimum
  double gap = 0.0;
  double primal_residual = 0.0;  // max violation of A x <= b, x >= 0
  double dual_residual = 0.0;    // max violation of A'y >= c, y >= 0
};

// Solves the primal and its dual separately; the dual objective certifies optimality.
CertifiedLp solve_lp_certified(const Matrix& a, const std::vector<double>& b, const std::vector<double>& c,
                               double eps = 1e-9);

}  // namespace mleak
