#include "mleak/random.hpp"

#include <cmath>

namespace mleak {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) {
  // 53 random bits in [0,1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> dirichlet_ones(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& t : v) {
    t = -std::log1p(-uniform01(rng));
    s += t;
  }
  if (s <= 0.0) {
    v.assign(n, 1.0 / static_cast<double>(n));
    return v;
  }
  for (auto& t : v) t /= s;
  return v;
}

namespace {

std::vector<double> sparse_row(Rng& rng, std::size_t n, double zero_prob) {
  std::vector<double> v = dirichlet_ones(rng, n);
  if (zero_prob <= 0.0) return v;
  std::size_t keep = static_cast<std::size_t>(rng() % n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != keep && uniform01(rng) < zero_prob) v[i] = 0.0;
    s += v[i];
  }
  if (s <= 0.0) {
    v.assign(n, 0.0);
    v[keep] = 1.0;
    return v;
  }
  for (auto& t : v) t /= s;
  return v;
}

}  // namespace

Pmf random_pmf(Rng& rng, std::size_t n, double zero_prob) { return Pmf(sparse_row(rng, n, zero_prob)); }

Channel random_channel(Rng& rng, std::size_t nx, std::size_t ny, double zero_prob) {
  Matrix w(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    auto r = sparse_row(rng, ny, zero_prob);
    for (std::size_t y = 0; y < ny; ++y) w(x, y) = r[y];
  }
  return Channel(std::move(w));
}

JointPmf random_joint(Rng& rng, std::size_t nx, std::size_t ny, double zero_prob) {
  auto v = sparse_row(rng, nx * ny, zero_prob);
  Matrix p(nx, ny);
  for (std::size_t i = 0; i < nx * ny; ++i) p(i / ny, i % ny) = v[i];
  return JointPmf(std::move(p));
}

AuxChannel random_aux(Rng& rng, std::size_t nu, std::size_t nx, double zero_prob) {
  Matrix p(nu, nx);
  for (std::size_t x = 0; x < nx; ++x) {
    auto c = sparse_row(rng, nu, zero_prob);
    for (std::size_t u = 0; u < nu; ++u) p(u, x) = c[u];
  }
  return AuxChannel(std::move(p));
}

}  // namespace mleak
