#include "mleak/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mleak/error.hpp"

namespace mleak {

AuxChannel::AuxChannel(std::vector<std::string> u_labels, std::vector<std::string> x_labels, Matrix p_ux,
                       double tol)
    : u_labels_(std::move(u_labels)), x_labels_(std::move(x_labels)), p_(std::move(p_ux)) {
  if (p_.rows() == 0 || p_.cols() == 0) throw Error(ErrorKind::EmptyAlphabet, "aux channel");
  if (u_labels_.size() != p_.rows() || x_labels_.size() != p_.cols())
    throw Error(ErrorKind::LabelMismatch, "aux labels vs matrix shape");
  for (std::size_t x = 0; x < p_.cols(); ++x) {
    double s = 0.0;
    for (std::size_t u = 0; u < p_.rows(); ++u) {
      if (!(p_(u, x) >= 0.0)) throw Error(ErrorKind::NegativeProbability, "aux entry");
      s += p_(u, x);
    }
    if (std::fabs(s - 1.0) > tol) throw Error(ErrorKind::NotNormalized, "aux column");
    for (std::size_t u = 0; u < p_.rows(); ++u) p_(u, x) /= s;
  }
}

AuxChannel::AuxChannel(Matrix p_ux, double tol)
    : AuxChannel(default_labels(p_ux.rows(), "u"), default_labels(p_ux.cols()), p_ux, tol) {}

GainFunction::GainFunction(std::vector<std::string> u_labels, std::vector<std::string> uhat_labels, Matrix g)
    : u_labels_(std::move(u_labels)), uhat_labels_(std::move(uhat_labels)), g_(std::move(g)) {
  if (u_labels_.size() != g_.rows() || uhat_labels_.size() != g_.cols())
    throw Error(ErrorKind::LabelMismatch, "gain labels vs matrix shape");
  for (double v : g_.data())
    if (!(v >= 0.0) || std::isinf(v)) throw Error(ErrorKind::InvalidParameter, "gain entries must be finite and >= 0");
}

GainFunction::GainFunction(Matrix g)
    : GainFunction(default_labels(g.rows(), "u"), default_labels(g.cols(), "g"), g) {}

GainFunction GainFunction::identity(std::size_t n) {
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = 1.0;
  return GainFunction(std::move(g));
}

namespace {

void check_compat(const AuxChannel& aux, std::size_t nx) {
  if (aux.nx() != nx) throw Error(ErrorKind::LabelMismatch, "aux channel input alphabet size");
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double top_k_sum(std::vector<double> v, std::size_t k) {
  std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += v[i];
  return s;
}

std::vector<double> column(const Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, c);
  return out;
}

// Snap k to an integer when it is one up to rounding in the division.
std::size_t atom_count(double k) {
  double r = std::round(k);
  if (std::fabs(k - r) <= 1e-9 * std::max(1.0, k)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(k));
}

}  // namespace

std::vector<double> aux_marginal(const AuxChannel& aux, const std::vector<double>& px) {
  check_compat(aux, px.size());
  std::vector<double> pu(aux.nu(), 0.0);
  for (std::size_t u = 0; u < aux.nu(); ++u)
    for (std::size_t x = 0; x < aux.nx(); ++x) pu[u] += aux(u, x) * px[x];
  return pu;
}

Matrix aux_joint(const AuxChannel& aux, const JointPmf& j) {
  check_compat(aux, j.nx());
  Matrix m(aux.nu(), j.ny());
  for (std::size_t u = 0; u < aux.nu(); ++u)
    for (std::size_t x = 0; x < j.nx(); ++x) {
      double a = aux(u, x);
      if (a == 0.0) continue;
      for (std::size_t y = 0; y < j.ny(); ++y) m(u, y) += a * j(x, y);
    }
  return m;
}

double prior_guess_prob(const AuxChannel& aux, const Pmf& px) {
  return max_of(aux_marginal(aux, px.probs()));
}

double posterior_guess_prob(const AuxChannel& aux, const JointPmf& j) {
  Matrix m = aux_joint(aux, j);
  double s = 0.0;
  for (std::size_t y = 0; y < m.cols(); ++y) s += max_of(column(m, y));
  return s;
}

LeakageValue leakage_of_U(const AuxChannel& aux, const JointPmf& j) {
  auto [px, py] = marginals(j);
  (void)py;
  return LeakageValue::nats(std::log(posterior_guess_prob(aux, j) / prior_guess_prob(aux, px)));
}

AuxChannel shattering_channel(const Pmf& px, double tau) {
  SupportMask mask = SupportMask::from(px, tau);
  double pstar = kInf;
  for (std::size_t x = 0; x < px.size(); ++x)
    if (mask[x]) pstar = std::min(pstar, px[x]);

  std::vector<std::size_t> atoms(px.size(), 1);
  std::size_t total = 0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (mask[x]) atoms[x] = atom_count(px[x] / pstar);
    total += atoms[x];
  }
  Matrix p(total, px.size());
  std::vector<std::string> labels;
  labels.reserve(total);
  std::size_t row = 0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    double share = mask[x] ? pstar / px[x] : 1.0;
    for (std::size_t a = 0; a < atoms[x]; ++a, ++row) {
      labels.push_back(px.labels()[x] + ":" + std::to_string(a + 1));
      p(row, x) = a + 1 < atoms[x] ? share : 1.0 - static_cast<double>(atoms[x] - 1) * share;
      if (p(row, x) < 0.0) p(row, x) = 0.0;
    }
  }
  return AuxChannel(std::move(labels), px.labels(), std::move(p));
}

LeakageValue k_guess_leakage_of_U(const AuxChannel& aux, const JointPmf& j, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidParameter, "k must be positive");
  if (k > aux.nu()) throw Error(ErrorKind::KTooLarge, "k exceeds |U|");
  auto [px, py] = marginals(j);
  (void)py;
  Matrix m = aux_joint(aux, j);
  double num = 0.0;
  for (std::size_t y = 0; y < m.cols(); ++y) num += top_k_sum(column(m, y), k);
  double den = top_k_sum(aux_marginal(aux, px.probs()), k);
  return LeakageValue::nats(std::log(num / den));
}

AuxChannel expand_for_k(const AuxChannel& aux, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidParameter, "k must be positive");
  Matrix p(aux.nu() * k, aux.nx());
  std::vector<std::string> labels;
  for (std::size_t u = 0; u < aux.nu(); ++u)
    for (std::size_t i = 0; i < k; ++i) {
      labels.push_back(aux.u_labels()[u] + "#" + std::to_string(i + 1));
      for (std::size_t x = 0; x < aux.nx(); ++x) p(u * k + i, x) = aux(u, x) / static_cast<double>(k);
    }
  return AuxChannel(std::move(labels), aux.x_labels(), std::move(p));
}

LeakageValue opportunistic_leakage(const std::vector<AuxChannel>& family, const JointPmf& j) {
  if (family.size() != j.ny()) throw Error(ErrorKind::LabelMismatch, "one aux channel per y required");
  auto [px, py] = marginals(j);
  double s = 0.0;
  for (std::size_t y = 0; y < j.ny(); ++y) {
    if (py[y] <= 0.0) continue;
    const AuxChannel& aux = family[y];
    check_compat(aux, j.nx());
    double best = 0.0;
    for (std::size_t u = 0; u < aux.nu(); ++u) {
      double v = 0.0;
      for (std::size_t x = 0; x < j.nx(); ++x) v += aux(u, x) * j(x, y);
      best = std::max(best, v);
    }
    s += best / max_of(aux_marginal(aux, px.probs()));
  }
  return LeakageValue::nats(std::log(s));
}

LeakageValue gain_leakage_of(const AuxChannel& aux, const GainFunction& g, const JointPmf& j) {
  if (g.nu() != aux.nu()) throw Error(ErrorKind::LabelMismatch, "gain rows vs |U|");
  auto [px, py] = marginals(j);
  (void)py;
  std::vector<double> pu = aux_marginal(aux, px.probs());
  Matrix m = aux_joint(aux, j);
  double den = 0.0;
  for (std::size_t h = 0; h < g.nuhat(); ++h) {
    double e = 0.0;
    for (std::size_t u = 0; u < aux.nu(); ++u) e += g.g()(u, h) * pu[u];
    den = std::max(den, e);
  }
  if (den <= 0.0) throw Error(ErrorKind::ZeroGain, "every guess has zero expected gain");
  double num = 0.0;
  for (std::size_t y = 0; y < j.ny(); ++y) {
    double best = 0.0;
    for (std::size_t h = 0; h < g.nuhat(); ++h) {
      double e = 0.0;
      for (std::size_t u = 0; u < aux.nu(); ++u) e += g.g()(u, h) * m(u, y);
      best = std::max(best, e);
    }
    num += best;
  }
  return LeakageValue::nats(std::log(num / den));
}

MapEstimate map_estimate(const JointPmf& j) {
  MapEstimate out;
  out.guess.resize(j.ny(), 0);
  for (std::size_t y = 0; y < j.ny(); ++y) {
    std::size_t arg = 0;
    for (std::size_t x = 1; x < j.nx(); ++x)
      if (j(x, y) > j(arg, y)) arg = x;
    out.guess[y] = arg;
    out.success += j(arg, y);
  }
  return out;
}

std::vector<PerYBound> per_y_bounds(const AuxChannel& aux, const JointPmf& j) {
  auto [px, py] = marginals(j);
  Matrix m = aux_joint(aux, j);
  double prior = max_of(aux_marginal(aux, px.probs()));
  std::vector<PerYBound> out;
  for (std::size_t y = 0; y < j.ny(); ++y) {
    if (py[y] <= 0.0) continue;
    PerYBound b;
    b.y = y;
    b.ratio = max_of(column(m, y)) / py[y] / prior;
    for (std::size_t x = 0; x < j.nx(); ++x)
      if (j(x, y) > 0.0) b.bound = std::max(b.bound, j(x, y) / px[x] / py[y]);
    out.push_back(b);
  }
  return out;
}

}  // namespace mleak
