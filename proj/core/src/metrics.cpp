#include "mleak/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mleak/error.hpp"

namespace mleak {

namespace {

std::vector<double> column_max(const Channel& ch, const SupportMask& mask) {
  std::vector<double> m(ch.ny(), 0.0);
  for (std::size_t x = 0; x < ch.nx(); ++x) {
    if (!mask[x]) continue;
    for (std::size_t y = 0; y < ch.ny(); ++y) m[y] = std::max(m[y], ch(x, y));
  }
  return m;
}

std::vector<double> column_min(const Channel& ch, const SupportMask& mask) {
  std::vector<double> m(ch.ny(), kInf);
  for (std::size_t x = 0; x < ch.nx(); ++x) {
    if (!mask[x]) continue;
    for (std::size_t y = 0; y < ch.ny(); ++y) m[y] = std::min(m[y], ch(x, y));
  }
  return m;
}

void require_mask(const Channel& ch, const SupportMask& mask) {
  if (mask.size() != ch.nx()) throw Error(ErrorKind::LabelMismatch, "mask size vs channel inputs");
  if (mask.count() == 0) throw Error(ErrorKind::AllMassOutOfSupport, "empty support mask");
}

}  // namespace

LeakageValue maximal_leakage_channel(const Channel& ch, const SupportMask& mask) {
  require_mask(ch, mask);
  double s = 0.0;
  for (double v : column_max(ch, mask)) s += v;
  return LeakageValue::nats(std::log(s));
}

LeakageValue maximal_leakage(const JointPmf& j, double tau) {
  Factorization f = factor(j, tau);
  return maximal_leakage_channel(f.channel, f.mask);
}

Pmf sibson_witness(const Channel& ch, const SupportMask& mask) {
  require_mask(ch, mask);
  std::vector<double> m = column_max(ch, mask);
  double s = 0.0;
  for (double v : m) s += v;
  for (double& v : m) v /= s;
  return Pmf(ch.y_labels(), std::move(m));
}

double dinf(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) throw Error(ErrorKind::LabelMismatch, "dinf shapes");
  double best = -kInf;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t k = 0; k < p.cols(); ++k) {
      if (p(i, k) <= 0.0) continue;
      if (q(i, k) <= 0.0) return kInf;
      best = std::max(best, std::log(p(i, k) / q(i, k)));
    }
  return best;
}

LeakageValue conditional_maximal_leakage(const CondJointPmf& cj, double tau) {
  LeakageValue best = LeakageValue::nats(0.0);
  for (std::size_t z = 0; z < cj.nz(); ++z) {
    if (cj.pz()[z] <= 0.0) continue;
    best = std::max(best, maximal_leakage(cj.part(z), tau));
  }
  return best;
}

std::pair<std::size_t, std::size_t> realizable_witness(const JointPmf& j) {
  auto [px, py] = marginals(j);
  double best = -kInf;
  std::pair<std::size_t, std::size_t> arg{0, 0};
  for (std::size_t x = 0; x < j.nx(); ++x)
    for (std::size_t y = 0; y < j.ny(); ++y) {
      if (j(x, y) <= 0.0) continue;
      double r = j(x, y) / (px[x] * py[y]);
      if (r > best) {
        best = r;
        arg = {x, y};
      }
    }
  return arg;
}

LeakageValue realizable_leakage(const JointPmf& j) {
  auto [px, py] = marginals(j);
  auto [x, y] = realizable_witness(j);
  return LeakageValue::nats(std::log(j(x, y) / (px[x] * py[y])));
}

LeakageValue local_dp(const Channel& ch) {
  double best = 0.0;
  for (std::size_t y = 0; y < ch.ny(); ++y) {
    double hi = 0.0, lo = kInf;
    for (std::size_t x = 0; x < ch.nx(); ++x) {
      hi = std::max(hi, ch(x, y));
      lo = std::min(lo, ch(x, y));
    }
    if (hi <= 0.0) continue;
    if (lo <= 0.0) return LeakageValue::infinite();
    best = std::max(best, std::log(hi / lo));
  }
  return LeakageValue::nats(best);
}

LeakageValue cost_leakage_channel(const Channel& ch, const SupportMask& mask) {
  require_mask(ch, mask);
  double s = 0.0;
  for (double v : column_min(ch, mask)) s += v;
  if (s <= 0.0) return LeakageValue::infinite();
  return LeakageValue::nats(-std::log(s));
}

LeakageValue cost_leakage(const JointPmf& j, double tau) {
  Factorization f = factor(j, tau);
  return cost_leakage_channel(f.channel, f.mask);
}

Pmf cost_leakage_witness(const Channel& ch, const SupportMask& mask) {
  require_mask(ch, mask);
  std::vector<double> m = column_min(ch, mask);
  double s = 0.0;
  for (double v : m) s += v;
  if (s <= 0.0) throw Error(ErrorKind::DegenerateMinSum, "column minima sum to zero; cost leakage is +inf");
  for (double& v : m) v /= s;
  return Pmf(ch.y_labels(), std::move(m));
}

LeakageValue realizable_cost(const JointPmf& j) {
  auto [px, py] = marginals(j);
  double best = 0.0;
  for (std::size_t x = 0; x < j.nx(); ++x) {
    if (px[x] <= 0.0) continue;
    for (std::size_t y = 0; y < j.ny(); ++y) {
      if (py[y] <= 0.0) continue;
      double w = j(x, y) / px[x];
      if (w <= 0.0) return LeakageValue::infinite();
      best = std::max(best, std::log(py[y] / w));
    }
  }
  return LeakageValue::nats(best);
}

double maximal_correlation(const JointPmf& j, CorrelationOptions opt) {
  auto [px, py] = marginals(j);
  std::vector<std::size_t> xs, ys;
  for (std::size_t x = 0; x < j.nx(); ++x)
    if (px[x] > 0.0) xs.push_back(x);
  for (std::size_t y = 0; y < j.ny(); ++y)
    if (py[y] > 0.0) ys.push_back(y);
  if (xs.size() < 2 || ys.size() < 2) return 0.0;

  // B with its known top singular pair (sqrt P_X, sqrt P_Y; value 1) removed.
  const std::size_t a = xs.size(), b = ys.size();
  Matrix d(a, b);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t k = 0; k < b; ++k) {
      double sx = px[xs[i]], sy = py[ys[k]];
      d(i, k) = (j(xs[i], ys[k]) - sx * sy) / std::sqrt(sx * sy);
    }

  std::vector<double> v(b), u(a);
  for (std::size_t k = 0; k < b; ++k) v[k] = 1.0 + 0.37 * std::sin(1.0 + 2.3 * static_cast<double>(k));
  auto normalize = [](std::vector<double>& w) {
    double n = 0.0;
    for (double t : w) n += t * t;
    n = std::sqrt(n);
    if (n > 0.0)
      for (double& t : w) t /= n;
    return n;
  };
  normalize(v);
  double sigma = 0.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    for (std::size_t i = 0; i < a; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < b; ++k) s += d(i, k) * v[k];
      u[i] = s;
    }
    double s_now = normalize(u);
    if (s_now == 0.0) return 0.0;
    for (std::size_t k = 0; k < b; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < a; ++i) s += d(i, k) * u[i];
      v[k] = s;
    }
    double t = normalize(v);
    if (t == 0.0) return 0.0;
    if (std::fabs(t - sigma) <= opt.tol * std::max(1.0, t)) {
      sigma = t;
      break;
    }
    sigma = t;
  }
  // Independent joints leave only rounding noise in the deflated operator.
  if (sigma < 1e-14) return 0.0;
  return std::clamp(sigma, 0.0, 1.0);
}

LeakageValue variance_leakage(const JointPmf& j, CorrelationOptions opt) {
  double rho = maximal_correlation(j, opt);
  double rest = 1.0 - rho * rho;
  if (rest <= 1e-12) return LeakageValue::infinite();
  return LeakageValue::nats(-std::log(rest));
}

CapacityResult capacity_detailed(const Channel& ch, double tol, int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tol must be positive");
  const std::size_t nx = ch.nx(), ny = ch.ny();
  std::vector<double> p(nx, 1.0 / static_cast<double>(nx)), q(ny), c(nx);
  CapacityResult res;
  for (int it = 1; it <= max_iter; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * ch(x, y);
    double cmax = -kInf, lsum = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double dx = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        if (ch(x, y) > 0.0) dx += ch(x, y) * std::log(ch(x, y) / q[y]);
      c[x] = dx;
      cmax = std::max(cmax, dx);
    }
    // Shift by cmax so the exponentials stay in range.
    for (std::size_t x = 0; x < nx; ++x) lsum += p[x] * std::exp(c[x] - cmax);
    double lower = cmax + std::log(lsum);
    res.lower = std::max(0.0, lower);
    res.upper = std::max(res.lower, cmax);
    res.iterations = it;
    if (res.upper - res.lower <= tol) {
      res.converged = true;
      break;
    }
    for (std::size_t x = 0; x < nx; ++x) p[x] = p[x] * std::exp(c[x] - cmax) / lsum;
  }
  res.input = p;
  res.value = LeakageValue::nats(0.5 * (res.lower + res.upper));
  return res;
}

LeakageValue capacity(const Channel& ch, double tol, int max_iter) {
  CapacityResult r = capacity_detailed(ch, tol, max_iter);
  if (!r.converged)
    throw Error(ErrorKind::MaxIterExceeded,
                "capacity bracket [" + std::to_string(r.lower) + ", " + std::to_string(r.upper) + "]");
  return r.value;
}

double additive_increase_bound(const JointPmf& j) {
  return 1.0 - std::exp(-maximal_leakage(j).nats());
}

bool mi_equality_conditions(const JointPmf& j, double tol) {
  auto [px, py] = marginals(j);
  double ref = -1.0;
  for (std::size_t y = 0; y < j.ny(); ++y) {
    if (py[y] <= 0.0) continue;
    double wmin = kInf, wmax = 0.0, reach = 0.0;
    for (std::size_t x = 0; x < j.nx(); ++x) {
      if (j(x, y) <= 0.0) continue;
      double w = j(x, y) / px[x];
      wmin = std::min(wmin, w);
      wmax = std::max(wmax, w);
      reach += px[x];
    }
    if (wmax - wmin > tol) return false;
    if (ref < 0.0) ref = reach;
    else if (std::fabs(reach - ref) > tol) return false;
  }
  return true;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "maximal_leakage", "realizable_leakage", "local_dp",          "cost_leakage",
      "realizable_cost", "maximal_correlation", "variance_leakage", "capacity",
      "mutual_information", "additive_increase_bound", "mi_equality"};
  return names;
}

MetricReport compute_metrics(const JointPmf& j, const std::vector<std::string>& names) {
  const std::vector<std::string>& want = names.empty() ? metric_names() : names;
  for (const auto& n : want)
    if (std::find(metric_names().begin(), metric_names().end(), n) == metric_names().end())
      throw Error(ErrorKind::InvalidParameter, "unknown metric '" + n + "'");

  Factorization f = factor(j);
  MetricReport rep;
  auto add = [&](const std::string& n, MetricEntry e) { rep.entries.emplace(n, std::move(e)); };
  for (const auto& n : want) {
    MetricEntry e;
    if (n == "maximal_leakage") {
      e.value = maximal_leakage_channel(f.channel, f.mask);
      e.witness = sibson_witness(f.channel, f.mask).probs();
    } else if (n == "realizable_leakage") {
      e.value = realizable_leakage(j);
      e.witness_pair = realizable_witness(j);
    } else if (n == "local_dp") {
      e.value = local_dp(f.channel);
      if (std::find(f.filled.begin(), f.filled.end(), true) != f.filled.end())
        rep.notes.push_back("local_dp includes out-of-support rows filled uniform");
    } else if (n == "cost_leakage") {
      e.value = cost_leakage_channel(f.channel, f.mask);
      if (!e.value.is_infinite()) e.witness = cost_leakage_witness(f.channel, f.mask).probs();
    } else if (n == "realizable_cost") {
      e.value = realizable_cost(j);
    } else if (n == "maximal_correlation") {
      double rho = maximal_correlation(j);
      e.raw = rho;
      e.value = LeakageValue::nats(0.0);
    } else if (n == "variance_leakage") {
      e.value = variance_leakage(j);
    } else if (n == "capacity") {
      CapacityResult c = capacity_detailed(f.channel);
      if (!c.converged) throw Error(ErrorKind::MaxIterExceeded, "capacity did not converge");
      e.value = c.value;
      e.witness = c.input;
      e.raw = c.gap();
    } else if (n == "mutual_information") {
      e.value = LeakageValue::nats(mutual_information(j));
    } else if (n == "additive_increase_bound") {
      e.raw = additive_increase_bound(j);
    } else if (n == "mi_equality") {
      e.raw = mi_equality_conditions(j) ? 1.0 : 0.0;
    }
    add(n, std::move(e));
  }
  return rep;
}

}  // namespace mleak
