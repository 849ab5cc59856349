#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mleak/dist.hpp"
#include "mleak/value.hpp"

namespace mleak {

// P_{U|X}: rows indexed by u, columns by x; each column sums to 1.
class AuxChannel {
 public:
  AuxChannel() = default;
  AuxChannel(std::vector<std::string> u_labels, std::vector<std::string> x_labels, Matrix p_ux,
             double tol = kNormTol);
  explicit AuxChannel(Matrix p_ux, double tol = kNormTol);

  const std::vector<std::string>& u_labels() const { return u_labels_; }
  const std::vector<std::string>& x_labels() const { return x_labels_; }
  const Matrix& p() const { return p_; }
  std::size_t nu() const { return p_.rows(); }
  std::size_t nx() const { return p_.cols(); }
  double operator()(std::size_t u, std::size_t x) const { return p_(u, x); }

 private:
  std::vector<std::string> u_labels_, x_labels_;
  Matrix p_;
};

class GainFunction {
 public:
  GainFunction(std::vector<std::string> u_labels, std::vector<std::string> uhat_labels, Matrix g);
  explicit GainFunction(Matrix g);
  static GainFunction identity(std::size_t n);

  const Matrix& g() const { return g_; }
  std::size_t nu() const { return g_.rows(); }
  std::size_t nuhat() const { return g_.cols(); }

 private:
  std::vector<std::string> u_labels_, uhat_labels_;
  Matrix g_;
};

std::vector<double> aux_marginal(const AuxChannel& aux, const std::vector<double>& px);
// P_UY as a |U| x |Y| matrix.
Matrix aux_joint(const AuxChannel& aux, const JointPmf& j);

double prior_guess_prob(const AuxChannel& aux, const Pmf& px);
double posterior_guess_prob(const AuxChannel& aux, const JointPmf& j);
LeakageValue leakage_of_U(const AuxChannel& aux, const JointPmf& j);

AuxChannel shattering_channel(const Pmf& px, double tau = kSupportTol);

LeakageValue k_guess_leakage_of_U(const AuxChannel& aux, const JointPmf& j, std::size_t k);
AuxChannel expand_for_k(const AuxChannel& aux, std::size_t k);

// One aux channel per y (indexed like j's y alphabet).
LeakageValue opportunistic_leakage(const std::vector<AuxChannel>& family, const JointPmf& j);
LeakageValue gain_leakage_of(const AuxChannel& aux, const GainFunction& g, const JointPmf& j);

struct MapEstimate {
  std::vector<std::size_t> guess;  // y -> x
  double success = 0.0;
};
MapEstimate map_estimate(const JointPmf& j);

// Per-y ratio max_u P(u|y)/max_u P_U and its bound from the channel.
struct PerYBound {
  std::size_t y = 0;
  double ratio = 0.0;
  double bound = 0.0;
};
std::vector<PerYBound> per_y_bounds(const AuxChannel& aux, const JointPmf& j);

}  // namespace mleak
