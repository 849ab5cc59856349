#include "mleak/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mleak/error.hpp"

namespace mleak {

namespace {

// Tableau layout follows the usual compact form: rows 0..m-1 constraints,
// row m the objective, row m+1 the phase-one objective; column n is the
// artificial variable and n+1 the right-hand side.
class Tableau {
 public:
  Tableau(const Matrix& a, const std::vector<double>& b, const std::vector<double>& c, double eps)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), eps_(eps),
        nb_(static_cast<std::size_t>(n_ + 1)), bb_(static_cast<std::size_t>(m_)),
        d_(static_cast<std::size_t>(m_ + 2), std::vector<double>(static_cast<std::size_t>(n_ + 2), 0.0)) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) at(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    for (int i = 0; i < m_; ++i) {
      bb_[static_cast<std::size_t>(i)] = n_ + i;
      at(i, n_) = -1;
      at(i, n_ + 1) = b[static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < n_; ++j) {
      nb_[static_cast<std::size_t>(j)] = j;
      at(m_, j) = -c[static_cast<std::size_t>(j)];
    }
    nb_[static_cast<std::size_t>(n_)] = -1;
    at(m_ + 1, n_) = 1;
  }

  LpResult solve() {
    LpResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    if (m_ > 0 && at(r, n_ + 1) < -eps_) {
      pivot(r, n_);
      if (!simplex(2) || at(m_ + 1, n_ + 1) < -eps_) {
        res.status = LpStatus::Infeasible;
        return res;
      }
      for (int i = 0; i < m_; ++i)
        if (bb_[static_cast<std::size_t>(i)] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j)
            if (std::make_pair(at(i, j), nb_[static_cast<std::size_t>(j)]) <
                std::make_pair(at(i, s), nb_[static_cast<std::size_t>(s)]))
              s = j;
          pivot(i, s);
        }
    }
    bool bounded = simplex(1);
    res.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i)
      if (bb_[static_cast<std::size_t>(i)] < n_ && bb_[static_cast<std::size_t>(i)] >= 0)
        res.x[static_cast<std::size_t>(bb_[static_cast<std::size_t>(i)])] = at(i, n_ + 1);
    if (!bounded) {
      res.status = LpStatus::Unbounded;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    }
    res.status = LpStatus::Optimal;
    res.value = at(m_, n_ + 1);
    return res;
  }

 private:
  double& at(int i, int j) { return d_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  void pivot(int r, int s) {
    double inv = 1.0 / at(r, s);
    auto& pr = d_[static_cast<std::size_t>(r)];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::fabs(at(i, s)) <= eps_) continue;
      auto& row = d_[static_cast<std::size_t>(i)];
      double f = row[static_cast<std::size_t>(s)] * inv;
      for (int j = 0; j < n_ + 2; ++j) row[static_cast<std::size_t>(j)] -= pr[static_cast<std::size_t>(j)] * f;
      row[static_cast<std::size_t>(s)] = pr[static_cast<std::size_t>(s)] * f;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) pr[static_cast<std::size_t>(j)] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) at(i, s) *= -inv;
    pr[static_cast<std::size_t>(s)] = inv;
    std::swap(bb_[static_cast<std::size_t>(r)], nb_[static_cast<std::size_t>(s)]);
  }

  bool simplex(int phase) {
    int x = m_ + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nb_[static_cast<std::size_t>(j)] == -phase) continue;
        if (s == -1 || std::make_pair(at(x, j), nb_[static_cast<std::size_t>(j)]) <
                           std::make_pair(at(x, s), nb_[static_cast<std::size_t>(s)]))
          s = j;
      }
      if (at(x, s) >= -eps_) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (at(i, s) <= eps_) continue;
        if (r == -1 || std::make_pair(at(i, n_ + 1) / at(i, s), bb_[static_cast<std::size_t>(i)]) <
                           std::make_pair(at(r, n_ + 1) / at(r, s), bb_[static_cast<std::size_t>(r)]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  double eps_;
  std::vector<int> nb_, bb_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

LpResult solve_lp(const Matrix& a, const std::vector<double>& b, const std::vector<double>& c, double eps) {
  if (a.rows() != b.size() || (a.rows() > 0 && a.cols() != c.size()))
    throw Error(ErrorKind::InvalidParameter, "lp dimensions");
  return Tableau(a, b, c, eps).solve();
}

CertifiedLp solve_lp_certified(const Matrix& a, const std::vector<double>& b, const std::vector<double>& c,
                               double eps) {
  CertifiedLp out;
  out.primal = solve_lp(a, b, c, eps);
  // Dual: min b'y s.t. A'y >= c, y >= 0, posed as max (-b)'y s.t. (-A')y <= -c.
  Matrix at(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) at(j, i) = -a(i, j);
  std::vector<double> nb(b.size()), nc(c.size());
  for (std::size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
  for (std::size_t j = 0; j < c.size(); ++j) nc[j] = -c[j];
  out.dual = solve_lp(at, nc, nb, eps);
  if (out.primal.status != LpStatus::Optimal || out.dual.status != LpStatus::Optimal) {
    out.gap = std::numeric_limits<double>::infinity();
    return out;
  }
  out.bound = -out.dual.value;
  out.gap = out.bound - out.primal.value;

  double pr = 0.0;
  for (double v : out.primal.x) pr = std::max(pr, -v);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * out.primal.x[j];
    pr = std::max(pr, s - b[i]);
  }
  double dr = 0.0;
  for (double v : out.dual.x) dr = std::max(dr, -v);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * out.dual.x[i];
    dr = std::max(dr, c[j] - s);
  }
  out.primal_residual = pr;
  out.dual_residual = dr;
  return out;
}

}  // namespace mleak
