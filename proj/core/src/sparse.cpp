#include "mleak/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "mleak/error.hpp"

namespace mleak {

SparseJoint::SparseJoint(std::size_t nx, std::size_t ny, std::vector<SparseEntry> entries, double tol)
    : nx_(nx), ny_(ny), entries_(std::move(entries)) {
  if (nx_ == 0 || ny_ == 0) throw Error(ErrorKind::EmptyAlphabet, "sparse joint");
  double total = 0.0;
  for (const auto& e : entries_) {
    if (e.x >= nx_ || e.y >= ny_) throw Error(ErrorKind::LabelMismatch, "sparse index out of range");
    if (!(e.p >= 0.0) || std::isinf(e.p)) throw Error(ErrorKind::NegativeProbability, "sparse entry");
    total += e.p;
  }
  if (std::fabs(total - 1.0) > tol) throw Error(ErrorKind::NotNormalized, "sparse joint mass");
  std::sort(entries_.begin(), entries_.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  for (std::size_t i = 1; i < entries_.size(); ++i)
    if (entries_[i].x == entries_[i - 1].x && entries_[i].y == entries_[i - 1].y)
      throw Error(ErrorKind::DuplicateLabel, "sparse cell listed twice");
  for (auto& e : entries_) e.p /= total;
}

std::vector<double> SparseJoint::marginal_x() const {
  std::vector<double> px(nx_, 0.0);
  for (const auto& e : entries_) px[e.x] += e.p;
  return px;
}

std::vector<double> SparseJoint::marginal_y() const {
  std::vector<double> py(ny_, 0.0);
  for (const auto& e : entries_) py[e.y] += e.p;
  return py;
}

SparseJoint to_sparse(const JointPmf& j) {
  std::vector<SparseEntry> e;
  for (std::size_t x = 0; x < j.nx(); ++x)
    for (std::size_t y = 0; y < j.ny(); ++y)
      if (j(x, y) > 0.0) e.push_back({x, y, j(x, y)});
  return SparseJoint(j.nx(), j.ny(), std::move(e));
}

JointPmf to_dense(const SparseJoint& s) {
  Matrix p(s.nx(), s.ny());
  for (const auto& e : s.entries()) p(e.x, e.y) += e.p;
  return JointPmf(std::move(p));
}

LeakageValue maximal_leakage(const SparseJoint& s, double tau) {
  std::vector<double> px = s.marginal_x();
  std::vector<double> best(s.ny(), 0.0);
  for (const auto& e : s.entries()) {
    if (px[e.x] < tau) continue;
    double w = e.p / px[e.x];
    if (w > best[e.y]) best[e.y] = w;
  }
  double sum = 0.0;
  for (double b : best) sum += b;
  return LeakageValue::nats(std::log(sum));
}

double mutual_information(const SparseJoint& s) {
  std::vector<double> px = s.marginal_x(), py = s.marginal_y();
  double i = 0.0;
  for (const auto& e : s.entries())
    if (e.p > 0.0) i += e.p * std::log(e.p / (px[e.x] * py[e.y]));
  return i < 0.0 ? 0.0 : i;
}

}  // namespace mleak
