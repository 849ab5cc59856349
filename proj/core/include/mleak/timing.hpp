#pragma once

#include <cstdint>

namespace mleak {

enum class TimingVariant { Queue, AccumulateDump, Dummy };

struct TimingScheme {
  TimingVariant variant = TimingVariant::Queue;
  double lambda = 1.0;
  double mu = 2.0;   // queue
  double tau = 1.0;  // batching variants
  double m = 0.0;    // batch capacity
  double m_b = 0.0;  // dummy floor
};

struct SchemeReport {
  double leakage_rate = 0.0;    // nats per unit time
  double mean_wait = 0.0;
  double overflow_bound = 0.0;  // Chernoff bound on P(N > m) per interval
  double overflow_exact = 0.0;  // Poisson tail, for comparison
  double overhead = 0.0;        // dummy packets per interval
};

SchemeReport queue_leakage_rate(double lambda, double mu);
// m may be non-integer; the formulas only need m+1 > 0.
SchemeReport accumulate_dump_report(double lambda, double tau, double m);
SchemeReport dummy_report(double lambda, double tau, double m, double m_b);
SchemeReport analytic_report(const TimingScheme& s);

double chernoff_overflow_bound(double mean, double m);
double poisson_tail_above(double mean, double m);  // P(N > m)
double expected_shortfall(double mean, double m_b);  // E[max(m_b - N, 0)]

struct SimulationReport {
  double mean_wait = 0.0;
  double wait_se = 0.0;  // batch-means standard error
  std::uint64_t packets = 0;
  std::uint64_t dropped = 0;
  std::uint64_t intervals = 0;
  double overflow_rate = 0.0;  // fraction of intervals with N > m
  double dummy_per_interval = 0.0;
};

// Horizon in the caller's time unit; must be at least ten service/batch scales.
SimulationReport simulate_scheme(const TimingScheme& s, std::uint64_t seed, double horizon);

}  // namespace mleak
