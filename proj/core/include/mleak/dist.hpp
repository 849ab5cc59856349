#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mleak {

inline constexpr double kSupportTol = 1e-12;
inline constexpr double kNormTol = 1e-9;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  explicit Matrix(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<std::vector<double>> to_nested() const;
  Matrix transposed() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// "0", "1", ... or prefix-qualified.
std::vector<std::string> default_labels(std::size_t n, const std::string& prefix = "");

class Pmf {
 public:
  Pmf() = default;
  // Validates and renormalizes. Throws mleak::Error.
  Pmf(std::vector<std::string> labels, std::vector<double> probs, double tol = kNormTol);
  explicit Pmf(std::vector<double> probs, double tol = kNormTol);

  static Pmf uniform(std::size_t n);
  static Pmf point_mass(std::size_t n, std::size_t at);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::optional<std::size_t> index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> probs_;
};

Pmf validate_pmf(const std::vector<std::pair<std::string, double>>& raw, double tol = kNormTol);

class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<std::string> x_labels, std::vector<std::string> y_labels, Matrix p,
           double tol = kNormTol);
  explicit JointPmf(Matrix p, double tol = kNormTol);

  const std::vector<std::string>& x_labels() const { return x_labels_; }
  const std::vector<std::string>& y_labels() const { return y_labels_; }
  const Matrix& p() const { return p_; }
  std::size_t nx() const { return p_.rows(); }
  std::size_t ny() const { return p_.cols(); }
  double operator()(std::size_t x, std::size_t y) const { return p_(x, y); }

 private:
  std::vector<std::string> x_labels_, y_labels_;
  Matrix p_;
};

class Channel {
 public:
  Channel() = default;
  Channel(std::vector<std::string> x_labels, std::vector<std::string> y_labels, Matrix w,
          double tol = kNormTol);
  explicit Channel(Matrix w, double tol = kNormTol);

  const std::vector<std::string>& x_labels() const { return x_labels_; }
  const std::vector<std::string>& y_labels() const { return y_labels_; }
  const Matrix& w() const { return w_; }
  std::size_t nx() const { return w_.rows(); }
  std::size_t ny() const { return w_.cols(); }
  double operator()(std::size_t x, std::size_t y) const { return w_(x, y); }

 private:
  std::vector<std::string> x_labels_, y_labels_;
  Matrix w_;
};

struct SupportMask {
  std::vector<bool> in;

  static SupportMask from(const Pmf& px, double tau = kSupportTol);
  static SupportMask full(std::size_t n);
  std::size_t size() const { return in.size(); }
  std::size_t count() const;
  bool operator[](std::size_t i) const { return in[i]; }
};

class CondJointPmf {
 public:
  CondJointPmf() = default;
  CondJointPmf(Pmf pz, std::vector<JointPmf> parts);

  const Pmf& pz() const { return pz_; }
  const std::vector<std::string>& z_labels() const { return pz_.labels(); }
  const std::vector<JointPmf>& parts() const { return parts_; }
  const JointPmf& part(std::size_t z) const { return parts_[z]; }
  std::size_t nz() const { return parts_.size(); }

 private:
  Pmf pz_;
  std::vector<JointPmf> parts_;
};

struct Factorization {
  Pmf px;
  Channel channel;
  SupportMask mask;
  // Rows that had no mass and were filled uniform.
  std::vector<bool> filled;
};

std::pair<Pmf, Pmf> marginals(const JointPmf& j);
Factorization factor(const JointPmf& j, double tol = kSupportTol);
JointPmf compose(const Pmf& px, const Channel& ch);
JointPmf transpose(const JointPmf& j);
// Channel X->Z from X->Y followed by Y->Z.
Channel cascade(const Channel& a, const Channel& b);

inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 24;
JointPmf product_iid(const JointPmf& j, int n, std::size_t cell_cap = kDefaultCellCap);
JointPmf product(const JointPmf& a, const JointPmf& b, std::size_t cell_cap = kDefaultCellCap);

// Nats. 0 log 0 = 0.
double entropy(const Pmf& p);
double entropy(const std::vector<double>& p);
double kl_divergence(const Pmf& p, const Pmf& q);
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);
double mutual_information(const JointPmf& j);
double conditional_mutual_information(const CondJointPmf& cj);

}  // namespace mleak
