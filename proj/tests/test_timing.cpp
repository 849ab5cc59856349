#include <gtest/gtest.h>

#include <cmath>

#include "mleak/error.hpp"
#include "mleak/timing.hpp"

using namespace mleak;

namespace {

double poisson_pmf(double mean, int k) { return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0)); }

}  // namespace

TEST(Queue, ClosedForm) {
  SchemeReport r = queue_leakage_rate(1.5, 3.0);
  EXPECT_DOUBLE_EQ(r.leakage_rate, 3.0);
  EXPECT_DOUBLE_EQ(r.mean_wait, 1.0 / 1.5);
  SchemeReport u = queue_leakage_rate(1.0, 3.0);
  EXPECT_DOUBLE_EQ(u.leakage_rate, 3.0);
  EXPECT_DOUBLE_EQ(u.mean_wait, 0.5);
  EXPECT_GT(queue_leakage_rate(1.0, 1.0 + 1e-9).mean_wait, 1e8);
  try {
    queue_leakage_rate(2.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnstableQueue);
  }
}

TEST(AccumulateDump, ReferenceOperatingPoint) {
  for (double lambda : {0.5, 1.0, 4.0}) {
    double tau = 2.0 / lambda, m = std::exp(3.0) - 1.0;
    SchemeReport r = accumulate_dump_report(lambda, tau, m);
    EXPECT_NEAR(r.leakage_rate, 1.5 * lambda, 1e-12);
    EXPECT_NEAR(r.mean_wait, tau / 2, 1e-15);
    double nu = std::exp(3.0) / 2 - 1;
    EXPECT_NEAR(std::log(r.overflow_bound), 2 * (nu - (1 + nu) * std::log(1 + nu)), 1e-9);
    EXPECT_NEAR(std::log(r.overflow_bound), -28.25, 0.01);
    EXPECT_LE(r.overflow_bound, 1e-12);
    EXPECT_LE(r.overflow_exact, r.overflow_bound);
  }
}

TEST(AccumulateDump, SmallCases) {
  EXPECT_EQ(accumulate_dump_report(1.0, 2.0, 0.0).leakage_rate, 0.0);
  SchemeReport r = accumulate_dump_report(1.0, 2.0, 3.0);
  EXPECT_NEAR(r.leakage_rate, std::log(4.0) / 2.0, 1e-15);
  EXPECT_NEAR(r.overflow_bound, std::exp(2 * (1 - 2 * std::log(2.0))), 1e-12);
  double tail = 1.0;
  for (int k = 0; k <= 3; ++k) tail -= poisson_pmf(2.0, k);
  EXPECT_NEAR(r.overflow_exact, tail, 1e-12);
  // nu <= 0: the bound is vacuous.
  EXPECT_EQ(chernoff_overflow_bound(5.0, 3.0), 1.0);
}

TEST(AccumulateDump, Monotone) {
  double last = 1e300;
  for (double tau : {0.5, 1.0, 2.0, 4.0}) {
    double v = accumulate_dump_report(1.0, tau, 5.0).leakage_rate;
    EXPECT_LT(v, last);
    last = v;
  }
  last = -1.0;
  for (double m : {0.0, 1.0, 2.0, 5.0, 9.0}) {
    double v = accumulate_dump_report(1.0, 2.0, m).leakage_rate;
    EXPECT_GT(v, last);
    last = v;
  }
}

TEST(Dummy, Formulas) {
  EXPECT_EQ(dummy_report(1.0, 2.0, 4.0, 4.0).leakage_rate, 0.0);
  EXPECT_DOUBLE_EQ(dummy_report(1.0, 2.0, 4.0, 0.0).leakage_rate, accumulate_dump_report(1.0, 2.0, 4.0).leakage_rate);
  EXPECT_NEAR(dummy_report(1.0, 2.0, 6.0, 2.0).leakage_rate, std::log(5.0) / 2.0, 1e-15);
  for (double mb : {1.0, 2.0, 3.0})
    EXPECT_LE(dummy_report(1.0, 2.0, 6.0, mb).leakage_rate, accumulate_dump_report(1.0, 2.0, 6.0).leakage_rate);

  // Overhead E[max(m_b - N, 0)] by direct summation.
  double want = 0.0;
  for (int k = 0; k < 2; ++k) want += (2 - k) * poisson_pmf(2.0, k);
  EXPECT_NEAR(dummy_report(1.0, 2.0, 6.0, 2.0).overhead, want, 1e-12);
  EXPECT_NEAR(expected_shortfall(2.0, 2.0), want, 1e-12);
  EXPECT_EQ(expected_shortfall(2.0, 0.0), 0.0);
  EXPECT_THROW(dummy_report(1.0, 2.0, 2.0, 3.0), Error);
}

TEST(Analytic, Dispatch) {
  TimingScheme q{TimingVariant::Queue, 1.0, 3.0};
  EXPECT_EQ(analytic_report(q).leakage_rate, 3.0);
  TimingScheme d{TimingVariant::AccumulateDump, 1.0, 0.0, 2.0, 3.0};
  EXPECT_EQ(analytic_report(d).leakage_rate, accumulate_dump_report(1.0, 2.0, 3.0).leakage_rate);
  TimingScheme b{TimingVariant::Dummy, 1.0, 0.0, 2.0, 6.0, 2.0};
  EXPECT_EQ(analytic_report(b).leakage_rate, dummy_report(1.0, 2.0, 6.0, 2.0).leakage_rate);
  EXPECT_THROW(analytic_report(TimingScheme{TimingVariant::AccumulateDump, 1.0, 0.0, -1.0, 3.0}), Error);
}

TEST(Simulation, AccumulateDumpWait) {
  TimingScheme s{TimingVariant::AccumulateDump, 1.0, 0.0, 2.0, std::exp(3.0) - 1.0};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimulationReport r = simulate_scheme(s, seed, 4000.0);
    EXPECT_NEAR(r.mean_wait, 1.0, 3 * r.wait_se) << seed;
    EXPECT_EQ(r.dropped, 0u);
  }
}

TEST(Simulation, OverflowBelowChernoff) {
  // Small m: drops are frequent, and released packets skew early so waits exceed tau/2.
  TimingScheme s{TimingVariant::AccumulateDump, 1.0, 0.0, 2.0, 3.0};
  double bound = accumulate_dump_report(1.0, 2.0, 3.0).overflow_bound;
  double exact = accumulate_dump_report(1.0, 2.0, 3.0).overflow_exact;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimulationReport r = simulate_scheme(s, seed, 4000.0);
    EXPECT_LE(r.overflow_rate, bound);
    EXPECT_NEAR(r.overflow_rate, exact, 0.04);
    EXPECT_GT(r.dropped, 0u);
    EXPECT_GT(r.mean_wait, 1.0);
  }
}

TEST(Simulation, QueueWait) {
  TimingScheme s{TimingVariant::Queue, 2.0, 4.0};
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimulationReport r = simulate_scheme(s, seed, 5000.0);
    inside += std::fabs(r.mean_wait - 0.5) <= 3 * r.wait_se;
    EXPECT_EQ(r.dropped, 0u);
  }
  EXPECT_GE(inside, 18);
}

TEST(Simulation, DummyAndHugeBatch) {
  TimingScheme big{TimingVariant::AccumulateDump, 3.0, 0.0, 1.0, 1000.0};
  SimulationReport r = simulate_scheme(big, 5, 500.0);
  EXPECT_EQ(r.dropped, 0u);
  EXPECT_EQ(r.overflow_rate, 0.0);

  TimingScheme dm{TimingVariant::Dummy, 1.0, 0.0, 2.0, 6.0, 2.0};
  SimulationReport d = simulate_scheme(dm, 9, 20000.0);
  EXPECT_NEAR(d.dummy_per_interval, dummy_report(1.0, 2.0, 6.0, 2.0).overhead, 0.03);
  EXPECT_NEAR(d.mean_wait, 1.0, 3 * d.wait_se);
}

TEST(Simulation, ScaleInvariance) {
  // Same scheme in a faster clock: waits scale by 1/lambda.
  TimingScheme a{TimingVariant::AccumulateDump, 1.0, 0.0, 2.0, 3.0};
  TimingScheme b{TimingVariant::AccumulateDump, 4.0, 0.0, 0.5, 3.0};
  SimulationReport ra = simulate_scheme(a, 3, 4000.0), rb = simulate_scheme(b, 3, 1000.0);
  EXPECT_NEAR(rb.mean_wait * 4.0, ra.mean_wait, 1e-9);
  EXPECT_EQ(ra.packets, rb.packets);
  EXPECT_THROW(simulate_scheme(a, 1, 5.0), Error);
}
