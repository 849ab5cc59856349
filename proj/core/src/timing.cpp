#include "mleak/timing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mleak/error.hpp"
#include "mleak/random.hpp"

namespace mleak {

namespace {

void check_batch(double lambda, double tau, double m) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidParameter, "lambda must be positive");
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidParameter, "tau must be positive");
  if (!(m >= 0.0)) throw Error(ErrorKind::InvalidParameter, "m must be >= 0");
}

double log_poisson_pmf(double mean, double k) { return k * std::log(mean) - mean - std::lgamma(k + 1.0); }

double exp_draw(Rng& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

struct BatchMeans {
  std::vector<double> values;
  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
  }
  double se(std::size_t batches = 20) const {
    std::size_t per = values.size() / batches;
    if (per == 0) return 0.0;
    std::vector<double> bm;
    for (std::size_t b = 0; b < batches; ++b) {
      double s = 0.0;
      for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += values[i];
      bm.push_back(s / static_cast<double>(per));
    }
    double mu = 0.0;
    for (double v : bm) mu += v;
    mu /= static_cast<double>(bm.size());
    double var = 0.0;
    for (double v : bm) var += (v - mu) * (v - mu);
    var /= static_cast<double>(bm.size() - 1);
    return std::sqrt(var / static_cast<double>(bm.size()));
  }
};

}  // namespace

double chernoff_overflow_bound(double mean, double m) {
  double nu = (m + 1.0) / mean - 1.0;
  if (nu <= 0.0) return 1.0;
  return std::exp(mean * (nu - (1.0 + nu) * std::log1p(nu)));
}

double poisson_tail_above(double mean, double m) {
  double k0 = std::floor(m) + 1.0;
  if (k0 <= 0.0) return 1.0;
  if (k0 <= mean + 1.0) {
    double cdf = 0.0;
    for (double k = 0.0; k < k0; k += 1.0) cdf += std::exp(log_poisson_pmf(mean, k));
    return std::max(0.0, 1.0 - cdf);
  }
  double tail = 0.0;
  for (double k = k0;; k += 1.0) {
    double t = std::exp(log_poisson_pmf(mean, k));
    tail += t;
    if (t <= tail * 1e-17 || t == 0.0) break;
  }
  return tail;
}

double expected_shortfall(double mean, double m_b) {
  double s = 0.0;
  for (double k = 0.0; k < m_b; k += 1.0) s += (m_b - k) * std::exp(log_poisson_pmf(mean, k));
  return s;
}

SchemeReport queue_leakage_rate(double lambda, double mu) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidParameter, "lambda must be positive");
  if (!(mu > lambda)) throw Error(ErrorKind::UnstableQueue, "service rate must exceed arrival rate");
  SchemeReport r;
  r.leakage_rate = mu;
  r.mean_wait = 1.0 / (mu - lambda);
  return r;
}

SchemeReport accumulate_dump_report(double lambda, double tau, double m) {
  check_batch(lambda, tau, m);
  SchemeReport r;
  r.leakage_rate = std::log(m + 1.0) / tau;
  r.mean_wait = tau / 2.0;
  r.overflow_bound = chernoff_overflow_bound(lambda * tau, m);
  r.overflow_exact = poisson_tail_above(lambda * tau, m);
  return r;
}

SchemeReport dummy_report(double lambda, double tau, double m, double m_b) {
  check_batch(lambda, tau, m);
  if (!(m_b >= 0.0 && m_b <= m)) throw Error(ErrorKind::InvalidParameter, "need 0 <= m_b <= m");
  SchemeReport r = accumulate_dump_report(lambda, tau, m);
  r.leakage_rate = std::log(m - m_b + 1.0) / tau;
  r.overhead = expected_shortfall(lambda * tau, m_b);
  return r;
}

SchemeReport analytic_report(const TimingScheme& s) {
  switch (s.variant) {
    case TimingVariant::Queue: return queue_leakage_rate(s.lambda, s.mu);
    case TimingVariant::AccumulateDump: return accumulate_dump_report(s.lambda, s.tau, s.m);
    case TimingVariant::Dummy: return dummy_report(s.lambda, s.tau, s.m, s.m_b);
  }
  return {};
}

SimulationReport simulate_scheme(const TimingScheme& s, std::uint64_t seed, double horizon) {
  analytic_report(s);  // parameter validation
  // Work in units where lambda = 1 and rescale waits on the way out.
  const double lam = s.lambda;
  const double T = horizon * lam;
  Rng rng = make_rng(seed, 7);
  SimulationReport rep;
  BatchMeans waits;

  if (s.variant == TimingVariant::Queue) {
    const double mu = s.mu / lam;
    if (!(horizon >= 10.0 / (s.mu - s.lambda))) throw Error(ErrorKind::InvalidParameter, "horizon too short");
    double t = 0.0, last_departure = 0.0;
    for (;;) {
      t += exp_draw(rng, 1.0);
      if (t > T) break;
      double start = std::max(t, last_departure);
      last_departure = start + exp_draw(rng, mu);
      waits.values.push_back(last_departure - t);
    }
    rep.packets = waits.values.size();
  } else {
    const double tau = s.tau * lam;
    if (!(horizon >= 10.0 * s.tau)) throw Error(ErrorKind::InvalidParameter, "horizon too short");
    auto intervals = static_cast<std::uint64_t>(std::floor(T / tau));
    std::uint64_t overflow = 0;
    double dummies = 0.0;
    double t = exp_draw(rng, 1.0);
    std::vector<double> batch;
    for (std::uint64_t k = 0; k < intervals; ++k) {
      double end = static_cast<double>(k + 1) * tau;
      batch.clear();
      while (t < end) {
        batch.push_back(t);
        t += exp_draw(rng, 1.0);
      }
      auto cnt = static_cast<double>(batch.size());
      if (cnt > s.m) ++overflow;
      auto keep = static_cast<std::size_t>(std::min(cnt, std::floor(s.m)));
      for (std::size_t i = 0; i < keep; ++i) waits.values.push_back(end - batch[i]);
      rep.dropped += batch.size() - keep;
      rep.packets += batch.size();
      if (s.variant == TimingVariant::Dummy) dummies += std::max(0.0, s.m_b - cnt);
    }
    rep.intervals = intervals;
    rep.overflow_rate = intervals ? static_cast<double>(overflow) / static_cast<double>(intervals) : 0.0;
    rep.dummy_per_interval = intervals ? dummies / static_cast<double>(intervals) : 0.0;
  }
  rep.mean_wait = waits.mean() / lam;
  rep.wait_se = waits.se() / lam;
  return rep;
}

}  // namespace mleak
