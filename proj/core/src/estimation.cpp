#include "mleak/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mleak/error.hpp"
#include "mleak/metrics.hpp"
#include "mleak/random.hpp"

namespace mleak {

SampleSet::SampleSet(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs, double nominal_rate)
    : x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      pairs_(std::move(pairs)),
      nominal_(nominal_rate),
      cx_(x_labels_.size(), 0),
      cy_(y_labels_.size(), 0),
      cxy_(x_labels_.size() * y_labels_.size(), 0) {
  if (x_labels_.empty() || y_labels_.empty()) throw Error(ErrorKind::EmptyAlphabet, "sample alphabets");
  for (auto [x, y] : pairs_) {
    if (x >= nx() || y >= ny()) throw Error(ErrorKind::LabelMismatch, "sample index out of range");
    ++cx_[x];
    ++cy_[y];
    ++cxy_[x * ny() + y];
  }
}

void EstimatorConfig::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::InvalidParameter, "theta must be in (0,1]");
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidParameter, "delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::InvalidParameter, "epsilon must be in (0,1)");
}

namespace {

struct CellSampler {
  std::vector<double> cdf;
  std::size_t ny;

  explicit CellSampler(const JointPmf& j) : ny(j.ny()) {
    cdf.reserve(j.nx() * j.ny());
    double acc = 0.0;
    for (double v : j.p().data()) {
      acc += v;
      cdf.push_back(acc);
    }
  }
  std::pair<std::uint32_t, std::uint32_t> draw(Rng& rng) const {
    double u = uniform01(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    // upper_bound never lands on a zero-mass cell; the clamp guards u == total.
    if (idx >= cdf.size()) idx = cdf.size() - 1;
    return {static_cast<std::uint32_t>(idx / ny), static_cast<std::uint32_t>(idx % ny)};
  }
};

SampleSet draw_n(const JointPmf& j, std::size_t count, double nominal, Rng& rng) {
  CellSampler cs(j);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pairs.push_back(cs.draw(rng));
  return SampleSet(j.x_labels(), j.y_labels(), std::move(pairs), nominal);
}

}  // namespace

SampleSet sample_fixed(const JointPmf& j, std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, 1);
  return draw_n(j, n, static_cast<double>(n), rng);
}

SampleSet sample_poisson(const JointPmf& j, double n, std::uint64_t seed) {
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidParameter, "poisson rate must be positive");
  Rng rng = make_rng(seed, 2);
  std::poisson_distribution<long long> pois(n);
  auto count = static_cast<std::size_t>(pois(rng));
  return draw_n(j, count, n, rng);
}

PoissonEstimate estimate_ml_poisson_detailed(const SampleSet& s, const EstimatorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  PoissonEstimate out;
  const double rate = s.nominal_rate() * cfg.theta_prime();
  if (!(rate > 0.0)) {
    out.fallback = true;
    return out;
  }
  // A single observed row has sum_y P(y|x) = 1, so M = 1 with no estimation noise.
  std::size_t observed = 0;
  for (std::size_t x = 0; x < s.nx(); ++x) observed += s.count_x(x) > 0;
  if (observed <= 1) return out;
  Rng rng = make_rng(seed, 3);
  std::poisson_distribution<long long> pois(rate);
  std::vector<std::size_t> keep(s.nx(), 0);
  for (std::size_t x = 0; x < s.nx(); ++x) {
    if (s.count_x(x) == 0) continue;
    auto k = static_cast<std::size_t>(pois(rng));
    if (k > s.count_x(x)) {
      out.fallback = true;
      return out;
    }
    keep[x] = k;
  }
  std::vector<std::size_t> seen(s.nx(), 0), kept(s.nx() * s.ny(), 0);
  for (auto [x, y] : s.pairs()) {
    if (seen[x] < keep[x]) {
      ++seen[x];
      ++kept[x * s.ny() + y];
    }
  }
  double m = 0.0;
  for (std::size_t y = 0; y < s.ny(); ++y) {
    std::size_t best = 0;
    for (std::size_t x = 0; x < s.nx(); ++x) best = std::max(best, kept[x * s.ny() + y]);
    m += static_cast<double>(best) / rate;
  }
  out.m_hat = m;
  out.value = LeakageValue::nats(std::log(std::max(m, 1.0)));
  return out;
}

LeakageValue estimate_ml_poisson(const SampleSet& s, const EstimatorConfig& cfg, std::uint64_t seed) {
  return estimate_ml_poisson_detailed(s, cfg, seed).value;
}

LeakageValue estimate_ml_plugin(const SampleSet& s, double theta) {
  (void)theta;
  if (s.size() == 0) throw Error(ErrorKind::EmptySample, "plug-in estimator needs samples");
  double m = 0.0;
  for (std::size_t y = 0; y < s.ny(); ++y) {
    double best = 0.0;
    for (std::size_t x = 0; x < s.nx(); ++x)
      if (s.count_x(x) > 0)
        best = std::max(best, static_cast<double>(s.count_xy(x, y)) / static_cast<double>(s.count_x(x)));
    m += best;
  }
  return LeakageValue::nats(std::log(std::max(m, 1.0)));
}

double sample_complexity_upper(std::size_t card_x, std::size_t card_y, double theta, double delta, double epsilon) {
  if (card_x == 0 || card_y == 0) throw Error(ErrorKind::InvalidParameter, "alphabet sizes must be positive");
  EstimatorConfig{theta, delta, epsilon, 0}.validate();
  double a = 2.0 - std::exp(-delta);
  double den = theta * (a * std::log(a) + std::exp(-delta) - 1.0);
  double num = 8.0 * (std::log(5.0 / epsilon) + static_cast<double>(card_y) * std::log(static_cast<double>(card_x)));
  return num / den;
}

double sample_complexity_lower_scaling(std::size_t card_y, double theta, double delta) {
  if (card_y < 2) throw Error(ErrorKind::InvalidParameter, "|Y| must be at least 2");
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorKind::InvalidParameter, "theta must be in (0,1]");
  double k = static_cast<double>(card_y);
  if (!(delta > 1.0 / k && delta < 0.5)) throw Error(ErrorKind::DeltaOutOfRange, "need 1/|Y| < delta < 1/2");
  double l = std::log(1.0 / delta);
  return theta * k * l * l / std::log(k);
}

JointPmf hard_instance(std::size_t card_y, const Pmf& p_y, double theta, std::size_t card_x) {
  if (p_y.size() != card_y) throw Error(ErrorKind::LabelMismatch, "p_y size vs card_y");
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorKind::InvalidParameter, "theta must be in (0,1)");
  if (card_x < 2) throw Error(ErrorKind::InvalidParameter, "hard instance needs at least two inputs");
  Matrix p(card_x, card_y);
  double rest = (1.0 - theta) / static_cast<double>(card_x - 1);
  for (std::size_t y = 0; y < card_y; ++y) {
    p(0, y) = theta * p_y[y];
    for (std::size_t x = 1; x < card_x; ++x) p(x, y) = rest / static_cast<double>(card_y);
  }
  return JointPmf(default_labels(card_x, "x"), p_y.labels(), std::move(p));
}

double hard_instance_value(const Pmf& p_y) {
  double k = static_cast<double>(p_y.size()), s = 0.0;
  for (double v : p_y.probs()) s += std::max(1.0 / k, v);
  return std::log(s);
}

ExperimentReport run_error_rate_experiment(const JointPmf& j, const EstimatorConfig& cfg, double n,
                                           std::size_t trials, std::uint64_t seed, SamplingMode mode) {
  cfg.validate();
  if (trials == 0) throw Error(ErrorKind::InvalidParameter, "trials must be at least 1");
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidParameter, "n must be positive");
  ExperimentReport rep;
  rep.true_leakage = maximal_leakage(j).nats();
  rep.n = n;
  rep.trials = trials;
  std::size_t fails = 0, fallbacks = 0;
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::uint64_t ts = derive_seed(seed, t);
    SampleSet s = mode == SamplingMode::Poisson
                      ? sample_poisson(j, n, ts)
                      : [&] {
                          Rng rng = make_rng(ts, 4);
                          return draw_n(j, static_cast<std::size_t>(std::ceil(2.0 * n)), n, rng);
                        }();
    PoissonEstimate e = estimate_ml_poisson_detailed(s, cfg, derive_seed(ts, 99));
    total += e.value.nats();
    if (std::fabs(e.value.nats() - rep.true_leakage) > cfg.delta) ++fails;
    if (e.fallback) ++fallbacks;
  }
  double tn = static_cast<double>(trials);
  rep.mean_estimate = total / tn;
  rep.failure_rate = static_cast<double>(fails) / tn;
  rep.fallback_rate = static_cast<double>(fallbacks) / tn;
  return rep;
}

std::vector<double> plugin_trials(const JointPmf& j, std::size_t n, std::size_t trials, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t)
    out.push_back(estimate_ml_plugin(sample_fixed(j, n, derive_seed(seed, t))).nats());
  return out;
}

}  // namespace mleak
