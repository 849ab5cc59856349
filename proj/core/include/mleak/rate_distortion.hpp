#pragma once

#include <vector>

#include "mleak/dist.hpp"
#include "mleak/mechanism.hpp"

namespace mleak {

struct RdPoint {
  double beta = 0.0;        // minus the slope
  double distortion = 0.0;  // achieved by the test channel
  double lower = 0.0;       // nats, bracket on R(distortion)
  double upper = 0.0;
  int iterations = 0;
};

// Blahut–Arimoto at fixed slope -beta; warm start through r (output law).
RdPoint rd_at_slope(const std::vector<double>& q, const Matrix& d, double beta, std::vector<double>& r,
                    double tol, int max_iter = 200000);

// R(Q,D) in nats.
double rate_distortion(const std::vector<double>& q, const Matrix& d, double level, double tol = 1e-9);
double rate_distortion(const Pmf& q, const DistortionSpec& spec, double level, double tol = 1e-9);

struct SingleLetterResult {
  double value_bits = 0.0;     // max [R(Q,D) - r]^+ over the ball
  double max_rate_bits = 0.0;  // max R(Q,D) over the ball
  std::vector<double> q_star;
  bool rate_assumption_violated = false;  // channel rate not above max R(Q,D)
};

// alpha and r in bits; alpha may be +inf. channel_rate_bits <= 0 disables the check.
SingleLetterResult single_letter_limit(const Pmf& p, const DistortionSpec& spec, double level, double r_bits,
                                       double alpha_bits, double tol = 1e-7, double channel_rate_bits = -1.0);

}  // namespace mleak
