#include "mleak/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "mleak/error.hpp"
#include "mleak/lp.hpp"

namespace mleak {

DistortionSpec DistortionSpec::hamming(std::size_t n, double level) {
  DistortionSpec s;
  s.d = Matrix(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) s.d(i, i) = 0.0;
  s.level = level;
  return s;
}

void DistortionSpec::validate() const {
  if (d.rows() == 0 || d.cols() == 0) throw Error(ErrorKind::EmptyAlphabet, "distortion matrix");
  for (double v : d.data())
    if (!(v >= 0.0) || std::isinf(v)) throw Error(ErrorKind::InvalidParameter, "distortion entries must be finite, >= 0");
  if (!(level >= 0.0) || std::isinf(level)) throw Error(ErrorKind::InvalidParameter, "distortion level");
}

double DistortionSpec::d_min() const {
  double out = 0.0;
  for (std::size_t x = 0; x < d.rows(); ++x)
    out = std::max(out, *std::min_element(d.row(x), d.row(x) + d.cols()));
  return out;
}

double DistortionSpec::d_max() const { return *std::max_element(d.data().begin(), d.data().end()); }

double DistortionSpec::expected_min(const Pmf& px) const {
  double out = 0.0;
  for (std::size_t x = 0; x < d.rows(); ++x) out += px[x] * *std::min_element(d.row(x), d.row(x) + d.cols());
  return out;
}

double binary_entropy_bits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

namespace {

void check_binary_range(double p, double level) {
  if (!(p > 0.0 && p <= 0.5)) throw Error(ErrorKind::ParameterOutOfRange, "p must be in (0, 1/2]");
  if (!(level >= 0.0 && level <= p)) throw Error(ErrorKind::ParameterOutOfRange, "D must be in [0, p]");
}

double leakage_exp(const Matrix& w, const std::vector<std::size_t>& rows) {
  double s = 0.0;
  for (std::size_t y = 0; y < w.cols(); ++y) {
    double m = 0.0;
    for (std::size_t x : rows) m = std::max(m, w(x, y));
    s += m;
  }
  return s;
}

// Constraint system over variables [W(s,y) for s in support, y] ++ [t_y].
struct MechanismLp {
  Matrix a;
  std::vector<double> b, c;
  std::size_t ns, ny;

  std::size_t wvar(std::size_t s, std::size_t y) const { return s * ny + y; }
  std::size_t tvar(std::size_t y) const { return ns * ny + y; }
  std::size_t nvars() const { return ns * ny + ny; }
};

MechanismLp build_lp(const Pmf& px, const DistortionSpec& spec, const std::vector<std::size_t>& sup) {
  MechanismLp lp;
  lp.ns = sup.size();
  lp.ny = spec.d.cols();
  const std::size_t rows = lp.ns * lp.ny + 2 * lp.ns + 1;
  lp.a = Matrix(rows, lp.nvars());
  lp.b.assign(rows, 0.0);
  std::size_t r = 0;
  for (std::size_t s = 0; s < lp.ns; ++s)
    for (std::size_t y = 0; y < lp.ny; ++y, ++r) {
      lp.a(r, lp.wvar(s, y)) = 1.0;
      lp.a(r, lp.tvar(y)) = -1.0;
    }
  for (std::size_t s = 0; s < lp.ns; ++s) {
    for (std::size_t y = 0; y < lp.ny; ++y) {
      lp.a(r, lp.wvar(s, y)) = 1.0;
      lp.a(r + 1, lp.wvar(s, y)) = -1.0;
    }
    lp.b[r] = 1.0;
    lp.b[r + 1] = -1.0;
    r += 2;
  }
  for (std::size_t s = 0; s < lp.ns; ++s)
    for (std::size_t y = 0; y < lp.ny; ++y) lp.a(r, lp.wvar(s, y)) = px[sup[s]] * spec.d(sup[s], y);
  lp.b[r] = spec.level;
  lp.c.assign(lp.nvars(), 0.0);
  for (std::size_t y = 0; y < lp.ny; ++y) lp.c[lp.tvar(y)] = -1.0;
  return lp;
}

Matrix append_row(const Matrix& a, const std::vector<double>& row) {
  Matrix out(a.rows() + 1, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) std::copy(a.row(i), a.row(i) + a.cols(), out.row(i));
  std::copy(row.begin(), row.end(), out.row(a.rows()));
  return out;
}

}  // namespace

MechanismSolution min_leakage_hamming_binary(double p, double level) {
  check_binary_range(p, level);
  MechanismSolution sol;
  double r = level / p;
  sol.channel = Channel(Matrix{{1.0, 0.0}, {r, 1.0 - r}});
  sol.leakage = LeakageValue::nats(std::log(2.0 - r));
  sol.distortion = p * r;
  sol.certificate = "closed-form";
  sol.lower_bound = 2.0 - r;
  return sol;
}

MechanismSolution min_leakage_general(const Pmf& px, const DistortionSpec& spec, double tol) {
  spec.validate();
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tol must be positive");
  if (spec.d.rows() != px.size()) throw Error(ErrorKind::LabelMismatch, "distortion rows vs |X|");
  if (spec.level < spec.expected_min(px) - 1e-12)
    throw Error(ErrorKind::Infeasible, "D below the smallest achievable expected distortion");

  SupportMask mask = SupportMask::from(px);
  std::vector<std::size_t> sup;
  for (std::size_t x = 0; x < px.size(); ++x)
    if (mask[x]) sup.push_back(x);

  MechanismLp lp = build_lp(px, spec, sup);
  CertifiedLp cert = solve_lp_certified(lp.a, lp.b, lp.c);
  if (cert.primal.status != LpStatus::Optimal)
    throw Error(ErrorKind::SolverStalled, "simplex did not reach an optimum");
  const double opt = -cert.primal.value;

  // Tie-break: lexicographically largest W over support rows, row-major.
  std::vector<double> x = cert.primal.x;
  const std::size_t nw = lp.ns * lp.ny;
  if (nw <= 64) {
    Matrix a = lp.a;
    std::vector<double> b = lp.b;
    std::vector<double> obj_row(lp.nvars(), 0.0);
    for (std::size_t y = 0; y < lp.ny; ++y) obj_row[lp.tvar(y)] = 1.0;
    a = append_row(a, obj_row);
    b.push_back(opt + 1e-10);
    for (std::size_t k = 0; k < nw; ++k) {
      std::vector<double> c(lp.nvars(), 0.0);
      c[k] = 1.0;
      LpResult r = solve_lp(a, b, c);
      if (r.status != LpStatus::Optimal) break;
      x = r.x;
      std::vector<double> fix(lp.nvars(), 0.0);
      fix[k] = -1.0;
      a = append_row(a, fix);
      b.push_back(-(r.value - 1e-10));
    }
  }

  Matrix w(px.size(), spec.d.cols());
  for (std::size_t s = 0; s < lp.ns; ++s) {
    double tot = 0.0;
    for (std::size_t y = 0; y < lp.ny; ++y) {
      double v = std::max(0.0, x[lp.wvar(s, y)]);
      if (v < 1e-15) v = 0.0;
      w(sup[s], y) = v;
      tot += v;
    }
    for (std::size_t y = 0; y < lp.ny; ++y) w(sup[s], y) /= tot;
  }
  for (std::size_t xi = 0; xi < px.size(); ++xi) {
    if (mask[xi]) continue;
    std::size_t best = sup.front();
    for (std::size_t s : sup) {
      auto dist = [&](std::size_t v) { return v > xi ? v - xi : xi - v; };
      if (dist(s) < dist(best)) best = s;
    }
    std::copy(w.row(best), w.row(best) + w.cols(), w.row(xi));
  }

  MechanismSolution sol;
  double e = leakage_exp(w, sup);
  sol.leakage = LeakageValue::nats(std::log(e));
  for (std::size_t s : sup)
    for (std::size_t y = 0; y < w.cols(); ++y) sol.distortion += px[s] * w(s, y) * spec.d(s, y);
  sol.channel = Channel(px.labels(), default_labels(spec.d.cols()), std::move(w));
  sol.certificate = "lp-dual";
  if (cert.dual.status == LpStatus::Optimal) {
    sol.lower_bound = -cert.bound;
    sol.gap = e - sol.lower_bound;
    sol.certified = sol.gap <= tol && cert.dual_residual <= tol;
  } else {
    sol.lower_bound = 0.0;
    sol.gap = std::numeric_limits<double>::infinity();
    sol.certified = false;
  }
  return sol;
}

MemorylessGap memoryless_lower_bound_hamming(double p, double level) {
  check_binary_range(p, level);
  MemorylessGap g;
  g.bound = LeakageValue::bits(1.0 - level / p);
  g.optimal_scheme = LeakageValue::bits(binary_entropy_bits(p) - binary_entropy_bits(level));
  return g;
}

LeakageValue per_letter_memoryless_optimum(double p, double level) {
  check_binary_range(p, level);
  return LeakageValue::bits(std::log2(2.0 - level / p));
}

}  // namespace mleak
