#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mleak/dist.hpp"
#include "mleak/value.hpp"

namespace mleak {

class SampleSet {
 public:
  SampleSet(std::vector<std::string> x_labels, std::vector<std::string> y_labels,
            std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs, double nominal_rate);

  const std::vector<std::string>& x_labels() const { return x_labels_; }
  const std::vector<std::string>& y_labels() const { return y_labels_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  std::size_t nx() const { return x_labels_.size(); }
  std::size_t ny() const { return y_labels_.size(); }
  double nominal_rate() const { return nominal_; }

  std::size_t count_x(std::size_t x) const { return cx_[x]; }
  std::size_t count_y(std::size_t y) const { return cy_[y]; }
  std::size_t count_xy(std::size_t x, std::size_t y) const { return cxy_[x * ny() + y]; }

 private:
  std::vector<std::string> x_labels_, y_labels_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
  double nominal_;
  std::vector<std::size_t> cx_, cy_, cxy_;
};

struct EstimatorConfig {
  double theta = 1.0;
  double delta = 0.1;    // nats
  double epsilon = 0.1;
  std::uint64_t seed = 0;

  double theta_prime() const { return theta / 4.0; }
  void validate() const;
};

SampleSet sample_fixed(const JointPmf& j, std::size_t n, std::uint64_t seed);
SampleSet sample_poisson(const JointPmf& j, double n, std::uint64_t seed);

struct PoissonEstimate {
  LeakageValue value;
  double m_hat = 1.0;
  bool fallback = false;
};
PoissonEstimate estimate_ml_poisson_detailed(const SampleSet& s, const EstimatorConfig& cfg, std::uint64_t seed);
LeakageValue estimate_ml_poisson(const SampleSet& s, const EstimatorConfig& cfg, std::uint64_t seed);

// theta is accepted for signature symmetry with the Poisson estimator; the
// plug-in rule itself does not use it.
LeakageValue estimate_ml_plugin(const SampleSet& s, double theta = 1.0);

double sample_complexity_upper(std::size_t card_x, std::size_t card_y, double theta, double delta, double epsilon);
// Scaling only; the unknown leading constant is omitted.
double sample_complexity_lower_scaling(std::size_t card_y, double theta, double delta);

// Row 0 is p_y with P_X = theta; the other card_x-1 rows are uniform.
JointPmf hard_instance(std::size_t card_y, const Pmf& p_y, double theta, std::size_t card_x = 2);
double hard_instance_value(const Pmf& p_y);

enum class SamplingMode { Poisson, Fixed };

struct ExperimentReport {
  double true_leakage = 0.0;  // nats
  double n = 0.0;
  std::size_t trials = 0;
  double mean_estimate = 0.0;
  double failure_rate = 0.0;
  double fallback_rate = 0.0;
};

// Fixed mode draws 2n samples and runs the estimator at nominal rate n.
ExperimentReport run_error_rate_experiment(const JointPmf& j, const EstimatorConfig& cfg, double n,
                                           std::size_t trials, std::uint64_t seed,
                                           SamplingMode mode = SamplingMode::Poisson);

std::vector<double> plugin_trials(const JointPmf& j, std::size_t n, std::size_t trials, std::uint64_t seed);

}  // namespace mleak
