#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mleak/dist.hpp"
#include "mleak/value.hpp"

namespace mleak {

LeakageValue maximal_leakage(const JointPmf& j, double tau = kSupportTol);
LeakageValue maximal_leakage_channel(const Channel& ch, const SupportMask& mask);
// Output distribution attaining the order-infinity infimum.
Pmf sibson_witness(const Channel& ch, const SupportMask& mask);
// log max_{a: P(a)>0} P(a)/Q(a) over matching matrices.
double dinf(const Matrix& p, const Matrix& q);

LeakageValue conditional_maximal_leakage(const CondJointPmf& cj, double tau = kSupportTol);

LeakageValue realizable_leakage(const JointPmf& j);
LeakageValue local_dp(const Channel& ch);

LeakageValue cost_leakage(const JointPmf& j, double tau = kSupportTol);
LeakageValue cost_leakage_channel(const Channel& ch, const SupportMask& mask);
// Throws DegenerateMinSum when every column has a zero on the support.
Pmf cost_leakage_witness(const Channel& ch, const SupportMask& mask);
LeakageValue realizable_cost(const JointPmf& j);

struct CorrelationOptions {
  double tol = 1e-11;
  int max_iter = 10000;
};
double maximal_correlation(const JointPmf& j, CorrelationOptions opt = {});
LeakageValue variance_leakage(const JointPmf& j, CorrelationOptions opt = {});

struct CapacityResult {
  LeakageValue value;  // midpoint of the bracket
  double lower = 0.0;  // nats, mutual information at the iterate
  double upper = 0.0;  // nats, max_x D(W_x || q)
  int iterations = 0;
  bool converged = false;
  std::vector<double> input;  // capacity-achieving input estimate
  double gap() const { return upper - lower; }
};
CapacityResult capacity_detailed(const Channel& ch, double tol = 1e-10, int max_iter = 100000);
// Throws MaxIterExceeded when the bracket does not close.
LeakageValue capacity(const Channel& ch, double tol = 1e-10, int max_iter = 100000);

double additive_increase_bound(const JointPmf& j);
bool mi_equality_conditions(const JointPmf& j, double tol = 1e-9);

// Every metric on one joint, with witnesses.
struct MetricEntry {
  LeakageValue value;
  std::optional<std::vector<double>> witness;  // Q_Y for leakages, input law for capacity
  std::optional<std::pair<std::size_t, std::size_t>> witness_pair;  // (x, y)
  std::optional<double> raw;  // quantities that are not leakages (ρ_m, bound)
};
struct MetricReport {
  std::map<std::string, MetricEntry> entries;
  std::vector<std::string> notes;
};

const std::vector<std::string>& metric_names();
// names empty means all.
MetricReport compute_metrics(const JointPmf& j, const std::vector<std::string>& names = {});

// (x, y) attaining realizable leakage, lowest index on ties.
std::pair<std::size_t, std::size_t> realizable_witness(const JointPmf& j);

}  // namespace mleak
