#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mleak/error.hpp"
#include "mleak/estimation.hpp"
#include "mleak/metrics.hpp"
#include "support.hpp"

using namespace mleak;
using namespace mleak::testing;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidParameter;
}

// Direct transcription of the achievability bound.
double upper_oracle(double nx, double ny, double theta, double delta, double eps) {
  double a = 2.0 - std::exp(-delta);
  return 8.0 * (std::log(5.0 / eps) + ny * std::log(nx)) / (theta * (a * std::log(a) + std::exp(-delta) - 1.0));
}

// One-sided 95% binomial allowance above p for t trials.
double band(double p, double t) { return p + 1.96 * std::sqrt(p * (1 - p) / t); }

}  // namespace

TEST(Sampling, FixedBasics) {
  JointPmf j = uniform_through(bsc(0.25));
  EXPECT_EQ(sample_fixed(j, 0, 1).size(), 0u);

  JointPmf point(Matrix{{0, 1}, {0, 0}});
  SampleSet s = sample_fixed(point, 5, 2);
  ASSERT_EQ(s.size(), 5u);
  for (auto [x, y] : s.pairs()) {
    EXPECT_EQ(x, 0u);
    EXPECT_EQ(y, 1u);
  }
  EXPECT_EQ(s.count_xy(0, 1), 5u);

  SampleSet a = sample_fixed(j, 100, 7), b = sample_fixed(j, 100, 7);
  EXPECT_EQ(a.pairs(), b.pairs());
}

TEST(Sampling, FixedLawOfLargeNumbers) {
  JointPmf j = compose(bernoulli(0.3), bsc(0.25));
  SampleSet s = sample_fixed(j, 100000, 11);
  auto [px, py] = marginals(j);
  EXPECT_NEAR(s.count_x(1) / 1e5, px[1], 0.01);
  EXPECT_NEAR(s.count_y(1) / 1e5, py[1], 0.01);
  std::size_t total = 0;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) total += s.count_xy(x, y);
  EXPECT_EQ(total, s.size());
}

TEST(Sampling, PoissonCounts) {
  JointPmf j = uniform_through(bsc(0.25));
  EXPECT_EQ(sample_poisson(j, 1e-9, 3).size(), 0u);

  double sum = 0.0;
  for (int r = 0; r < 10000; ++r) sum += static_cast<double>(sample_poisson(j, 100, 1000 + r).size());
  EXPECT_NEAR(sum / 10000, 100.0, 3.0);

  // Per-cell counts: variance matches mean.
  const int runs = 1500;
  std::vector<double> c(runs);
  for (int r = 0; r < runs; ++r) c[r] = static_cast<double>(sample_poisson(j, 1e4, 50000 + r).count_xy(0, 1));
  double mean = std::accumulate(c.begin(), c.end(), 0.0) / runs, var = 0.0;
  for (double v : c) var += (v - mean) * (v - mean);
  var /= runs - 1;
  EXPECT_NEAR(mean, 1e4 * 0.125, 10.0);
  EXPECT_NEAR(var / mean, 1.0, 0.1);
}

TEST(Config, Validation) {
  EXPECT_EQ(kind_of([] { EstimatorConfig{0.0, 0.1, 0.1, 0}.validate(); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { EstimatorConfig{1.5, 0.1, 0.1, 0}.validate(); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { EstimatorConfig{0.5, 0.0, 0.1, 0}.validate(); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { EstimatorConfig{0.5, 0.1, 1.0, 0}.validate(); }), ErrorKind::InvalidParameter);
  EXPECT_NO_THROW((EstimatorConfig{1.0, 0.1, 0.5, 0}.validate()));
  EXPECT_EQ((EstimatorConfig{0.5, 0.1, 0.1, 0}.theta_prime()), 0.125);
}

TEST(PoissonEstimator, TrivialCases) {
  EstimatorConfig cfg{1.0, 0.1, 0.1, 0};
  JointPmf one(Matrix{{0.2, 0.5, 0.3}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SampleSet s = sample_poisson(one, 500, seed);
    EXPECT_EQ(estimate_ml_poisson(s, cfg, seed).nats(), 0.0);
  }
  SampleSet degenerate({"a", "b"}, {"u", "v"}, std::vector<std::pair<std::uint32_t, std::uint32_t>>(40, {0, 0}), 40);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PoissonEstimate e = estimate_ml_poisson_detailed(degenerate, cfg, seed);
    EXPECT_EQ(e.value.nats(), 0.0);
    EXPECT_TRUE(e.fallback || e.m_hat <= 1.0);
  }
}

TEST(PoissonEstimator, AlwaysFiniteNonnegative) {
  Rng rng = make_rng(301);
  for (int t = 0; t < 100; ++t) {
    JointPmf j = random_joint(rng, 2 + rng() % 3, 2 + rng() % 4, 0.2);
    EstimatorConfig cfg{0.2, 0.1, 0.1, 0};
    SampleSet s = sample_poisson(j, 1 + rng() % 500, t);
    PoissonEstimate e = estimate_ml_poisson_detailed(s, cfg, t);
    EXPECT_GE(e.value.nats(), 0.0);
    EXPECT_FALSE(e.value.is_infinite());
    if (e.fallback) EXPECT_EQ(e.value.nats(), 0.0);
  }
}

TEST(PoissonEstimator, GuaranteeAtUpperBound) {
  JointPmf j = uniform_through(bsc(0.25));
  EstimatorConfig cfg{0.5, 0.1, 0.1, 0};
  double n = sample_complexity_upper(2, 2, 0.5, 0.1, 0.1);
  ExperimentReport r = run_error_rate_experiment(j, cfg, n, 200, 77);
  EXPECT_NEAR(r.true_leakage, std::log(1.5), 1e-12);
  EXPECT_LE(r.failure_rate, band(0.1, 200));
  EXPECT_LE(r.fallback_rate, band(2 * 0.1 / 5, 200));

  ExperimentReport f = run_error_rate_experiment(j, cfg, n, 200, 78, SamplingMode::Fixed);
  EXPECT_LE(f.failure_rate, band(r.failure_rate + 0.1 / 5, 200));

  ExperimentReport again = run_error_rate_experiment(j, cfg, n, 200, 77);
  EXPECT_EQ(again.failure_rate, r.failure_rate);
  EXPECT_EQ(again.mean_estimate, r.mean_estimate);
}

TEST(PoissonEstimator, ExperimentExtremes) {
  JointPmf j = uniform_through(bsc(0.25));
  EXPECT_EQ(run_error_rate_experiment(j, EstimatorConfig{0.5, 100.0, 0.1, 0}, 50, 50, 1).failure_rate, 0.0);
  EXPECT_GE(run_error_rate_experiment(j, EstimatorConfig{0.5, 0.01, 0.1, 0}, 1, 200, 2).failure_rate, 0.9);
  EXPECT_EQ(kind_of([&] { run_error_rate_experiment(j, EstimatorConfig{}, 10, 0, 1); }),
            ErrorKind::InvalidParameter);
}

TEST(PluginEstimator, Fixtures) {
  SampleSet exhaustive({"0", "1"}, {"0", "1"}, {{0, 0}, {1, 1}}, 2);
  EXPECT_NEAR(estimate_ml_plugin(exhaustive).nats(), std::log(2.0), 1e-15);

  // Column "2" never observed.
  SampleSet missing({"0", "1"}, {"0", "1", "2"}, {{0, 0}, {1, 1}, {0, 0}, {1, 1}}, 4);
  EXPECT_NEAR(estimate_ml_plugin(missing).nats(), std::log(2.0), 1e-15);

  EXPECT_EQ(kind_of([] { estimate_ml_plugin(SampleSet({"0"}, {"0"}, {}, 0)); }), ErrorKind::EmptySample);

  SampleSet big = sample_fixed(uniform_through(bsc(0.25)), 100000, 5);
  EXPECT_NEAR(estimate_ml_plugin(big).nats(), std::log(1.5), 0.02);

  JointPmf j = uniform_through(bsc(0.25));
  EXPECT_EQ(plugin_trials(j, 200, 10, 9), plugin_trials(j, 200, 10, 9));
}

TEST(SampleComplexity, UpperBound) {
  double v = sample_complexity_upper(2, 2, 0.5, 0.1, 0.1);
  EXPECT_NEAR(v, upper_oracle(2, 2, 0.5, 0.1, 0.1), 1e-9 * v);
  EXPECT_NEAR(v, 1.93e4, 0.01e4);
  EXPECT_GT(sample_complexity_upper(2, 4, 0.5, 0.1, 0.1), v);
  EXPECT_GT(sample_complexity_upper(3, 2, 0.5, 0.1, 0.1), v);
  EXPECT_LT(sample_complexity_upper(2, 2, 0.6, 0.1, 0.1), v);
  EXPECT_LT(sample_complexity_upper(2, 2, 0.5, 0.2, 0.1), v);
  EXPECT_LT(sample_complexity_upper(2, 2, 0.5, 0.1, 0.2), v);

  double big = sample_complexity_upper(2, 3, 1.0, 50.0, 0.1);
  EXPECT_NEAR(big, 8 * (std::log(50.0) + 3 * std::log(2.0)) / (2 * std::log(2.0) - 1), 1e-6 * big);
  EXPECT_EQ(kind_of([] { sample_complexity_upper(2, 2, 0.0, 0.1, 0.1); }), ErrorKind::InvalidParameter);
}

TEST(SampleComplexity, LowerScaling) {
  const double e2 = std::exp(2.0);
  // |Y| must be an integer, so check the formula at the nearest one against its own transcription.
  std::size_t k = 7;
  EXPECT_NEAR(sample_complexity_lower_scaling(k, 1.0, 1 / std::exp(1.0)), k / std::log(7.0), 1e-12);
  EXPECT_NEAR(e2 / 2, e2 * 1.0 / std::log(e2), 1e-12);
  EXPECT_NEAR(sample_complexity_lower_scaling(100, 0.2, 0.05), 2 * sample_complexity_lower_scaling(100, 0.1, 0.05),
              1e-12);
  EXPECT_NEAR(sample_complexity_lower_scaling(100, 0.1, 0.05), 100 * 0.1 * std::pow(std::log(20.0), 2) / std::log(100.0),
              1e-12);
  EXPECT_NEAR(sample_complexity_lower_scaling(100, 0.1, 0.05), 19.5, 0.05);
  EXPECT_EQ(kind_of([] { sample_complexity_lower_scaling(10, 0.5, 0.05); }), ErrorKind::DeltaOutOfRange);
  EXPECT_EQ(kind_of([] { sample_complexity_lower_scaling(10, 0.5, 0.5); }), ErrorKind::DeltaOutOfRange);
}

TEST(HardInstance, Fixtures) {
  JointPmf u = hard_instance(8, Pmf::uniform(8), 0.3);
  EXPECT_NEAR(maximal_leakage(u).nats(), 0.0, 1e-12);
  EXPECT_NEAR(hard_instance_value(Pmf::uniform(8)), 0.0, 1e-12);

  Pmf half(std::vector<double>{.5, .5, 0, 0});
  EXPECT_NEAR(hard_instance_value(half), std::log(1.5), 1e-15);
  EXPECT_NEAR(maximal_leakage(hard_instance(4, half, 0.2)).nats(), std::log(1.5), 1e-12);

  for (std::size_t s : {1, 3, 5, 8}) {
    std::vector<double> p(16, 0.0);
    for (std::size_t y = 0; y < s; ++y) p[y] = 1.0 / static_cast<double>(s);
    Pmf py(p);
    EXPECT_NEAR(hard_instance_value(py), std::log(2.0 - s / 16.0), 1e-12);
    EXPECT_NEAR(maximal_leakage(hard_instance(16, py, 0.05)).nats(), std::log(2.0 - s / 16.0), 1e-12);
  }
  EXPECT_EQ(kind_of([] { hard_instance(3, Pmf::uniform(4), 0.1); }), ErrorKind::LabelMismatch);
}

TEST(HardInstance, MatchesLeakageOnRandomPy) {
  Rng rng = make_rng(302);
  for (int t = 0; t < 100; ++t) {
    std::size_t k = 2 + rng() % 10;
    Pmf py = random_pmf(rng, k, 0.3);
    double theta = 0.05 + 0.9 * uniform01(rng);
    EXPECT_NEAR(maximal_leakage(hard_instance(k, py, theta)).nats(), hard_instance_value(py), 1e-12);
    EXPECT_NEAR(maximal_leakage(hard_instance(k, py, theta, 3)).nats(), hard_instance_value(py), 1e-12);
  }
}
