#pragma once

#include <cmath>
#include <vector>

#include "mleak/dist.hpp"
#include "mleak/random.hpp"
#include "mleak/sparse.hpp"

namespace mleak::testing {

inline Channel bsc(double p) { return Channel(Matrix{{1 - p, p}, {p, 1 - p}}); }

// Outputs ordered {0, e, 1}.
inline Channel bec(double eps) {
  return Channel({"0", "1"}, {"0", "e", "1"}, Matrix{{1 - eps, eps, 0.0}, {0.0, eps, 1 - eps}});
}

inline Channel fixture3_channel() {
  return Channel(Matrix{{.2, .5, .3}, {.3, .4, .3}, {.2, .4, .4}});
}

inline Channel identity_channel(std::size_t n) {
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) w(i, i) = 1.0;
  return Channel(std::move(w));
}

inline Pmf bernoulli(double p) { return Pmf(std::vector<double>{1 - p, p}); }

inline JointPmf uniform_through(const Channel& ch) { return compose(Pmf::uniform(ch.nx()), ch); }

// Markov chain X - Y - Z with random channels.
struct Chain {
  Pmf px;
  Channel xy, yz;
};

inline Chain random_chain(Rng& rng, double zero_prob = 0.0) {
  auto size = [&] { return 2 + rng() % 4; };
  std::size_t nx = size(), ny = size(), nz = size();
  return {random_pmf(rng, nx, zero_prob), random_channel(rng, nx, ny, zero_prob),
          random_channel(rng, ny, nz, zero_prob)};
}

// X uniform on {0,1}^{8n}. Y reveals X when X mod 8 = 0 and outputs the symbol
// "1" otherwise; Z is the first n+1 bits of X.
inline SparseJoint crossing_y(unsigned n) {
  const std::size_t nx = std::size_t{1} << (8 * n), multiples = nx / 8;
  const double p = 1.0 / static_cast<double>(nx);
  std::vector<SparseEntry> e;
  e.reserve(nx);
  for (std::size_t x = 0; x < nx; ++x) e.push_back({x, x % 8 == 0 ? x / 8 : multiples, p});
  return SparseJoint(nx, multiples + 1, std::move(e));
}

inline SparseJoint crossing_z(unsigned n) {
  const std::size_t nx = std::size_t{1} << (8 * n);
  const unsigned shift = 8 * n - (n + 1);
  const double p = 1.0 / static_cast<double>(nx);
  std::vector<SparseEntry> e;
  e.reserve(nx);
  for (std::size_t x = 0; x < nx; ++x) e.push_back({x, x >> shift, p});
  return SparseJoint(nx, std::size_t{1} << (n + 1), std::move(e));
}

// X^n uniform; Y = X^n or its complement with probability 1/2 each.
inline JointPmf bit_flip(unsigned n) {
  const std::size_t m = std::size_t{1} << n;
  Matrix w(m, m);
  for (std::size_t x = 0; x < m; ++x) {
    w(x, x) += 0.5;
    w(x, (m - 1) ^ x) += 0.5;
  }
  return compose(Pmf::uniform(m), Channel(std::move(w)));
}

// Z - X - Y with P_{X|Z} and W = P_{Y|X}.
struct Fork {
  Pmf pz;
  Channel xz;  // rows z, cols x
  Channel w;   // rows x, cols y
};

inline Fork random_fork(Rng& rng, double zero_prob) {
  std::size_t nz = 2 + rng() % 3, nx = 2 + rng() % 3, ny = 2 + rng() % 3;
  return {random_pmf(rng, nz), random_channel(rng, nz, nx, zero_prob), random_channel(rng, nx, ny)};
}

inline JointPmf x_to_yz(const Fork& f) {
  std::size_t nz = f.pz.size(), nx = f.w.nx(), ny = f.w.ny();
  Matrix m(nx, ny * nz);
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) m(x, y * nz + z) += f.pz[z] * f.xz(z, x) * f.w(x, y);
  return JointPmf(m);
}

inline JointPmf x_to_z(const Fork& f) {
  Matrix m(f.w.nx(), f.pz.size());
  for (std::size_t z = 0; z < f.pz.size(); ++z)
    for (std::size_t x = 0; x < f.w.nx(); ++x) m(x, z) = f.pz[z] * f.xz(z, x);
  return JointPmf(m);
}

inline JointPmf x_to_y(const Fork& f) {
  JointPmf xz = x_to_z(f);
  return compose(marginals(xz).first, f.w);
}

inline CondJointPmf y_given_z(const Fork& f) {
  std::vector<JointPmf> parts;
  for (std::size_t z = 0; z < f.pz.size(); ++z) {
    std::vector<double> px(f.w.nx());
    for (std::size_t x = 0; x < px.size(); ++x) px[x] = f.xz(z, x);
    parts.push_back(compose(Pmf(px), f.w));
  }
  return CondJointPmf(f.pz, parts);
}

}  // namespace mleak::testing
