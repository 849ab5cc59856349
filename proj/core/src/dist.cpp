#include "mleak/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "mleak/error.hpp"

namespace mleak {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NegativeProbability: return "NegativeProbability";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::AllMassOutOfSupport: return "AllMassOutOfSupport";
    case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::ZeroGain: return "ZeroGain";
    case ErrorKind::DegenerateMinSum: return "DegenerateMinSum";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::InfeasibleRate: return "InfeasibleRate";
    case ErrorKind::UnstableQueue: return "UnstableQueue";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::SolverStalled: return "SolverStalled";
    case ErrorKind::CoverageFailure: return "CoverageFailure";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateMinSum:
    case ErrorKind::Infeasible:
    case ErrorKind::InfeasibleRate:
    case ErrorKind::UnstableQueue:
    case ErrorKind::SizeCapExceeded:
    case ErrorKind::ZeroGain:
      return ErrorCategory::Domain;
    case ErrorKind::MaxIterExceeded:
    case ErrorKind::SolverStalled:
    case ErrorKind::CoverageFailure:
      return ErrorCategory::Solver;
    default:
      return ErrorCategory::Validation;
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::InvalidParameter, "ragged matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix::Matrix(const std::vector<std::vector<double>>& rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.front().size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::InvalidParameter, "ragged matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

std::vector<std::vector<double>> Matrix::to_nested() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i), row(i) + cols_);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::string> default_labels(std::size_t n, const std::string& prefix) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

namespace {

void check_labels(const std::vector<std::string>& labels, const char* what) {
  if (labels.empty()) throw Error(ErrorKind::EmptyAlphabet, what);
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) throw Error(ErrorKind::DuplicateLabel, std::string(what) + " '" + l + "'");
}

// Checks entries and total mass, rescales in place.
void normalize_mass(std::vector<double>& v, double tol, const char* what) {
  double total = 0.0;
  for (double p : v) {
    if (!(p >= 0.0) || std::isinf(p))
      throw Error(ErrorKind::NegativeProbability, std::string(what) + ": entry " + std::to_string(p));
    total += p;
  }
  if (std::fabs(total - 1.0) > tol)
    throw Error(ErrorKind::NotNormalized, std::string(what) + ": mass " + std::to_string(total));
  for (double& p : v) p /= total;
}

}  // namespace

Pmf::Pmf(std::vector<std::string> labels, std::vector<double> probs, double tol)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorKind::EmptyAlphabet, "pmf");
  if (labels_.size() != probs_.size()) throw Error(ErrorKind::LabelMismatch, "pmf labels vs probs");
  check_labels(labels_, "pmf");
  normalize_mass(probs_, tol, "pmf");
}

Pmf::Pmf(std::vector<double> probs, double tol)
    : Pmf(default_labels(probs.size()), probs, tol) {}

Pmf Pmf::uniform(std::size_t n) {
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Pmf Pmf::point_mass(std::size_t n, std::size_t at) {
  std::vector<double> v(n, 0.0);
  v.at(at) = 1.0;
  return Pmf(std::move(v));
}

std::optional<std::size_t> Pmf::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

Pmf validate_pmf(const std::vector<std::pair<std::string, double>>& raw, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tol must be positive");
  std::vector<std::string> labels;
  std::vector<double> probs;
  for (const auto& [l, p] : raw) {
    labels.push_back(l);
    probs.push_back(p);
  }
  return Pmf(std::move(labels), std::move(probs), tol);
}

JointPmf::JointPmf(std::vector<std::string> x_labels, std::vector<std::string> y_labels, Matrix p,
                   double tol)
    : x_labels_(std::move(x_labels)), y_labels_(std::move(y_labels)), p_(std::move(p)) {
  if (p_.rows() == 0 || p_.cols() == 0) throw Error(ErrorKind::EmptyAlphabet, "joint");
  if (x_labels_.size() != p_.rows() || y_labels_.size() != p_.cols())
    throw Error(ErrorKind::LabelMismatch, "joint labels vs matrix shape");
  check_labels(x_labels_, "joint x");
  check_labels(y_labels_, "joint y");
  std::vector<double> v = p_.data();
  normalize_mass(v, tol, "joint");
  for (std::size_t i = 0; i < p_.rows(); ++i)
    for (std::size_t k = 0; k < p_.cols(); ++k) p_(i, k) = v[i * p_.cols() + k];
}

JointPmf::JointPmf(Matrix p, double tol)
    : JointPmf(default_labels(p.rows()), default_labels(p.cols()), p, tol) {}

Channel::Channel(std::vector<std::string> x_labels, std::vector<std::string> y_labels, Matrix w,
                 double tol)
    : x_labels_(std::move(x_labels)), y_labels_(std::move(y_labels)), w_(std::move(w)) {
  if (w_.rows() == 0 || w_.cols() == 0) throw Error(ErrorKind::EmptyAlphabet, "channel");
  if (x_labels_.size() != w_.rows() || y_labels_.size() != w_.cols())
    throw Error(ErrorKind::LabelMismatch, "channel labels vs matrix shape");
  check_labels(x_labels_, "channel x");
  check_labels(y_labels_, "channel y");
  for (std::size_t i = 0; i < w_.rows(); ++i) {
    std::vector<double> r(w_.row(i), w_.row(i) + w_.cols());
    normalize_mass(r, tol, "channel row");
    std::copy(r.begin(), r.end(), w_.row(i));
  }
}

Channel::Channel(Matrix w, double tol)
    : Channel(default_labels(w.rows()), default_labels(w.cols()), w, tol) {}

SupportMask SupportMask::from(const Pmf& px, double tau) {
  SupportMask m;
  m.in.resize(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) m.in[i] = px[i] >= tau;
  if (m.count() == 0) throw Error(ErrorKind::AllMassOutOfSupport, "no x above support tolerance");
  return m;
}

SupportMask SupportMask::full(std::size_t n) {
  SupportMask m;
  m.in.assign(n, true);
  return m;
}

std::size_t SupportMask::count() const {
  return static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
}

CondJointPmf::CondJointPmf(Pmf pz, std::vector<JointPmf> parts)
    : pz_(std::move(pz)), parts_(std::move(parts)) {
  if (parts_.size() != pz_.size()) throw Error(ErrorKind::LabelMismatch, "one joint per z required");
  for (const auto& j : parts_) {
    if (j.x_labels() != parts_.front().x_labels() || j.y_labels() != parts_.front().y_labels())
      throw Error(ErrorKind::LabelMismatch, "per-z joints must share alphabets");
  }
}

std::pair<Pmf, Pmf> marginals(const JointPmf& j) {
  std::vector<double> px(j.nx(), 0.0), py(j.ny(), 0.0);
  for (std::size_t x = 0; x < j.nx(); ++x)
    for (std::size_t y = 0; y < j.ny(); ++y) {
      px[x] += j(x, y);
      py[y] += j(x, y);
    }
  return {Pmf(j.x_labels(), std::move(px)), Pmf(j.y_labels(), std::move(py))};
}

Factorization factor(const JointPmf& j, double tol) {
  auto [px, py] = marginals(j);
  (void)py;
  SupportMask mask = SupportMask::from(px, tol);
  Matrix w(j.nx(), j.ny());
  std::vector<bool> filled(j.nx(), false);
  for (std::size_t x = 0; x < j.nx(); ++x) {
    if (mask[x]) {
      double s = 0.0;
      for (std::size_t y = 0; y < j.ny(); ++y) s += j(x, y);
      for (std::size_t y = 0; y < j.ny(); ++y) w(x, y) = j(x, y) / s;
    } else {
      filled[x] = true;
      for (std::size_t y = 0; y < j.ny(); ++y) w(x, y) = 1.0 / static_cast<double>(j.ny());
    }
  }
  return {px, Channel(j.x_labels(), j.y_labels(), std::move(w)), mask, std::move(filled)};
}

JointPmf compose(const Pmf& px, const Channel& ch) {
  if (px.labels() != ch.x_labels()) throw Error(ErrorKind::LabelMismatch, "px labels vs channel inputs");
  Matrix p(ch.nx(), ch.ny());
  for (std::size_t x = 0; x < ch.nx(); ++x)
    for (std::size_t y = 0; y < ch.ny(); ++y) p(x, y) = px[x] * ch(x, y);
  return JointPmf(ch.x_labels(), ch.y_labels(), std::move(p));
}

JointPmf transpose(const JointPmf& j) {
  return JointPmf(j.y_labels(), j.x_labels(), j.p().transposed());
}

Channel cascade(const Channel& a, const Channel& b) {
  if (a.y_labels() != b.x_labels()) throw Error(ErrorKind::LabelMismatch, "cascade alphabets");
  Matrix w(a.nx(), b.ny());
  for (std::size_t x = 0; x < a.nx(); ++x)
    for (std::size_t y = 0; y < a.ny(); ++y) {
      double ay = a(x, y);
      if (ay == 0.0) continue;
      for (std::size_t z = 0; z < b.ny(); ++z) w(x, z) += ay * b(y, z);
    }
  return Channel(a.x_labels(), b.y_labels(), std::move(w));
}

namespace {

std::vector<std::string> pair_labels(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a)
    for (const auto& t : b) out.push_back(s + "," + t);
  return out;
}

}  // namespace

JointPmf product(const JointPmf& a, const JointPmf& b, std::size_t cell_cap) {
  std::size_t nx = a.nx() * b.nx(), ny = a.ny() * b.ny();
  if (nx == 0 || ny > cell_cap / nx) throw Error(ErrorKind::SizeCapExceeded, "product joint too large");
  Matrix p(nx, ny);
  for (std::size_t x1 = 0; x1 < a.nx(); ++x1)
    for (std::size_t x2 = 0; x2 < b.nx(); ++x2)
      for (std::size_t y1 = 0; y1 < a.ny(); ++y1)
        for (std::size_t y2 = 0; y2 < b.ny(); ++y2)
          p(x1 * b.nx() + x2, y1 * b.ny() + y2) = a(x1, y1) * b(x2, y2);
  return JointPmf(pair_labels(a.x_labels(), b.x_labels()), pair_labels(a.y_labels(), b.y_labels()),
                  std::move(p));
}

JointPmf product_iid(const JointPmf& j, int n, std::size_t cell_cap) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "n must be positive");
  double cells = std::pow(static_cast<double>(j.nx() * j.ny()), n);
  if (cells > static_cast<double>(cell_cap)) throw Error(ErrorKind::SizeCapExceeded, "product_iid too large");
  JointPmf out = j;
  for (int i = 1; i < n; ++i) out = product(out, j, cell_cap);
  return out;
}

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

double entropy(const Pmf& p) { return entropy(p.probs()); }

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw Error(ErrorKind::LabelMismatch, "kl alphabet sizes");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d < 0.0 ? 0.0 : d;
}

double kl_divergence(const Pmf& p, const Pmf& q) {
  if (p.labels() != q.labels()) throw Error(ErrorKind::LabelMismatch, "kl labels");
  return kl_divergence(p.probs(), q.probs());
}

double mutual_information(const JointPmf& j) {
  auto [px, py] = marginals(j);
  double i = 0.0;
  for (std::size_t x = 0; x < j.nx(); ++x)
    for (std::size_t y = 0; y < j.ny(); ++y) {
      double v = j(x, y);
      if (v > 0.0) i += v * std::log(v / (px[x] * py[y]));
    }
  return i < 0.0 ? 0.0 : i;
}

double conditional_mutual_information(const CondJointPmf& cj) {
  double i = 0.0;
  for (std::size_t z = 0; z < cj.nz(); ++z)
    if (cj.pz()[z] > 0.0) i += cj.pz()[z] * mutual_information(cj.part(z));
  return i;
}

}  // namespace mleak
