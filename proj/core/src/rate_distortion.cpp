#include "mleak/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mleak/error.hpp"
#include "mleak/value.hpp"

namespace mleak {

RdPoint rd_at_slope(const std::vector<double>& q, const Matrix& d, double beta, std::vector<double>& r,
                    double tol, int max_iter) {
  const std::size_t nx = d.rows(), ny = d.cols();
  if (r.size() != ny) r.assign(ny, 1.0 / static_cast<double>(ny));
  std::vector<double> dmin(nx), logz(nx), c(ny), rn(ny);
  for (std::size_t x = 0; x < nx; ++x) dmin[x] = *std::min_element(d.row(x), d.row(x) + ny);
  Matrix e(nx, ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) e(x, y) = std::exp(-beta * (d(x, y) - dmin[x]));

  RdPoint pt;
  pt.beta = beta;
  for (int it = 1; it <= max_iter; ++it) {
    // Shifted partition functions: Z(x) = exp(-beta dmin) * z(x).
    std::vector<double> z(nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) z[x] += r[y] * e(x, y);
      logz[x] = std::log(z[x]) - beta * dmin[x];
    }
    double dist = 0.0, rate = 0.0, qlogz = 0.0;
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      if (q[x] <= 0.0) continue;
      qlogz += q[x] * logz[x];
      for (std::size_t y = 0; y < ny; ++y) {
        double ratio = e(x, y) / z[x];  // Q(y|x) / r(y)
        c[y] += q[x] * ratio;
        double qyx = r[y] * ratio;
        if (qyx > 0.0) {
          dist += q[x] * qyx * d(x, y);
          rate += q[x] * qyx * std::log(ratio);
        }
      }
    }
    double cmax = 0.0, rclogc = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      cmax = std::max(cmax, c[y]);
      if (r[y] > 0.0 && c[y] > 0.0) rclogc += r[y] * c[y] * std::log(c[y]);
    }
    double base = -beta * dist - qlogz;
    pt.distortion = dist;
    pt.lower = std::max(0.0, base - std::log(cmax));
    pt.upper = std::max(pt.lower, std::min(rate, base - rclogc));
    pt.iterations = it;
    if (pt.upper - pt.lower <= tol) return pt;
    for (std::size_t y = 0; y < ny; ++y) rn[y] = r[y] * c[y];
    double s = 0.0;
    for (double v : rn) s += v;
    for (std::size_t y = 0; y < ny; ++y) r[y] = rn[y] / s;
  }
  throw Error(ErrorKind::MaxIterExceeded, "rate-distortion iteration did not close its bracket");
}

double rate_distortion(const std::vector<double>& q, const Matrix& d, double level, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tol must be positive");
  if (q.size() != d.rows()) throw Error(ErrorKind::LabelMismatch, "source vs distortion rows");
  const std::size_t nx = d.rows(), ny = d.cols();
  double dmin_exp = 0.0, dzero = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < nx; ++x) dmin_exp += q[x] * *std::min_element(d.row(x), d.row(x) + ny);
  for (std::size_t y = 0; y < ny; ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < nx; ++x) s += q[x] * d(x, y);
    dzero = std::min(dzero, s);
  }
  if (level >= dzero) return 0.0;
  if (level < dmin_exp - 1e-12) throw Error(ErrorKind::Infeasible, "D below the smallest achievable distortion");

  const double inner = tol / 4.0;
  std::vector<double> r;
  const double beta_cap = 2000.0;
  double hi = 1.0;
  RdPoint ph = rd_at_slope(q, d, hi, r, inner);
  while (ph.distortion > level && hi < beta_cap) {
    hi = std::min(beta_cap, hi * 2.0);
    ph = rd_at_slope(q, d, hi, r, inner);
  }
  if (ph.distortion > level) return 0.5 * (ph.lower + ph.upper);  // level sits at the bottom of the curve

  double lo = 0.0;
  RdPoint best = ph;
  for (int it = 0; it < 200; ++it) {
    if (std::fabs(best.distortion - level) * best.beta <= inner) break;
    double mid = 0.5 * (lo + hi);
    RdPoint pm = rd_at_slope(q, d, mid, r, inner);
    if (pm.distortion > level) lo = mid;
    else hi = mid;
    if (std::fabs(pm.distortion - level) < std::fabs(best.distortion - level)) best = pm;
    if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
  }
  // First-order correction along the supporting line of slope -beta.
  double v = 0.5 * (best.lower + best.upper) - best.beta * (level - best.distortion);
  return std::max(0.0, v);
}

double rate_distortion(const Pmf& q, const DistortionSpec& spec, double level, double tol) {
  spec.validate();
  return rate_distortion(q.probs(), spec.d, level, tol);
}

namespace {

double kl_bits(const std::vector<double>& q, const Pmf& p) { return kl_divergence(q, p.probs()) / kLn2; }

bool in_ball(const std::vector<double>& q, const Pmf& p, double alpha_bits) {
  if (std::isinf(alpha_bits)) return std::isfinite(kl_bits(q, p));
  return kl_bits(q, p) <= alpha_bits + 1e-12;
}

}  // namespace

SingleLetterResult single_letter_limit(const Pmf& p, const DistortionSpec& spec, double level, double r_bits,
                                       double alpha_bits, double tol, double channel_rate_bits) {
  spec.validate();
  if (spec.d.rows() != p.size()) throw Error(ErrorKind::LabelMismatch, "distortion rows vs |X|");
  if (!(alpha_bits >= 0.0)) throw Error(ErrorKind::InvalidParameter, "alpha must be >= 0");
  if (!(r_bits >= 0.0)) throw Error(ErrorKind::InvalidParameter, "key rate must be >= 0");
  if (level < spec.d_min() - 1e-12) throw Error(ErrorKind::Infeasible, "D below D_min");
  const std::size_t k = p.size();
  if (k > 4) throw Error(ErrorKind::SizeCapExceeded, "single-letter search supports |X| <= 4");

  auto rate_bits = [&](const std::vector<double>& q) { return rate_distortion(q, spec.d, level, tol) / kLn2; };
  SingleLetterResult res;
  double best = -1.0;
  std::vector<double> arg = p.probs();

  if (k == 1) {
    best = rate_bits(arg);
  } else if (k == 2) {
    // Feasible q1 form an interval around p1; find its ends by bisection.
    auto feasible = [&](double t) { return in_ball({1.0 - t, t}, p, alpha_bits); };
    auto edge = [&](double inside, double outside) {
      if (feasible(outside)) return outside;
      for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (inside + outside);
        (feasible(m) ? inside : outside) = m;
      }
      return inside;
    };
    double lo = edge(p[1], 0.0), hi = edge(p[1], 1.0);
    const int grid = 200;
    double step = (hi - lo) / grid, bt = p[1];
    best = rate_bits(arg);
    for (int i = 0; i <= grid; ++i) {
      double t = lo + step * i;
      double v = rate_bits({1.0 - t, t});
      if (v > best) {
        best = v;
        bt = t;
      }
    }
    // Golden-section refinement on the neighbouring cells.
    double a = std::max(lo, bt - step), b = std::min(hi, bt + step);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    double f1 = rate_bits({1.0 - c1, c1}), f2 = rate_bits({1.0 - c2, c2});
    for (int i = 0; i < 80 && b - a > 1e-12; ++i) {
      if (f1 >= f2) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - g * (b - a);
        f1 = rate_bits({1.0 - c1, c1});
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + g * (b - a);
        f2 = rate_bits({1.0 - c2, c2});
      }
    }
    if (f1 > best) {
      best = f1;
      bt = c1;
    }
    if (f2 > best) {
      best = f2;
      bt = c2;
    }
    arg = {1.0 - bt, bt};
  } else {
    const unsigned res_grid = k == 3 ? 60 : 24;
    best = rate_bits(arg);
    std::vector<unsigned> c(k, 0);
    // Enumerate grid points of the simplex.
    std::vector<std::vector<double>> pts;
    auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
      if (pos + 1 == k) {
        c[pos] = left;
        std::vector<double> q(k);
        for (std::size_t i = 0; i < k; ++i) q[i] = static_cast<double>(c[i]) / res_grid;
        pts.push_back(std::move(q));
        return;
      }
      for (unsigned v = 0; v <= left; ++v) {
        c[pos] = v;
        self(self, pos + 1, left - v);
      }
    };
    rec(rec, 0, res_grid);
    for (const auto& q : pts) {
      if (!in_ball(q, p, alpha_bits)) continue;
      double v = rate_bits(q);
      if (v > best) {
        best = v;
        arg = q;
      }
    }
    // Pattern search: move mass between coordinate pairs with shrinking steps.
    for (double h = 1.0 / res_grid; h > 1e-9; h *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            if (i == j || arg[j] < h) continue;
            std::vector<double> q = arg;
            q[i] += h;
            q[j] -= h;
            if (!in_ball(q, p, alpha_bits)) continue;
            double v = rate_bits(q);
            if (v > best + 1e-15) {
              best = v;
              arg = q;
              moved = true;
            }
          }
      }
    }
  }
  res.max_rate_bits = std::max(0.0, best);
  res.value_bits = std::max(0.0, res.max_rate_bits - r_bits);
  res.q_star = arg;
  res.rate_assumption_violated = channel_rate_bits > 0.0 && channel_rate_bits <= res.max_rate_bits;
  return res;
}

}  // namespace mleak
