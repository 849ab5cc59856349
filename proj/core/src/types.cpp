#include "mleak/types.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "mleak/error.hpp"

namespace mleak {

namespace {

void compositions_rec(unsigned left, std::size_t pos, std::vector<unsigned>& cur,
                      std::vector<std::vector<unsigned>>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (unsigned c = 0; c <= left; ++c) {
    cur[pos] = c;
    compositions_rec(left - c, pos + 1, cur, out);
  }
}

std::uint64_t multinomial(const std::vector<unsigned>& counts) {
  // Built as a product of binomials; each step stays an integer.
  unsigned total = 0;
  std::uint64_t out = 1;
  for (unsigned c : counts) {
    for (unsigned i = 1; i <= c; ++i) {
      ++total;
      std::uint64_t g = std::gcd(out, std::uint64_t{i});
      std::uint64_t a = out / g, b = total / (i / g);
      if (a > std::numeric_limits<std::uint64_t>::max() / b) return 0;
      out = a * b;
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<unsigned>> enumerate_compositions(unsigned n, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::EmptyAlphabet, "compositions need k >= 1");
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(k, 0);
  compositions_rec(n, 0, cur, out);
  return out;
}

TypeClass make_type(const std::vector<unsigned>& counts, const Pmf& p) {
  if (counts.size() != p.size()) throw Error(ErrorKind::LabelMismatch, "type counts vs source alphabet");
  TypeClass t;
  t.counts = counts;
  unsigned n = 0;
  for (unsigned c : counts) n += c;
  if (n == 0) throw Error(ErrorKind::InvalidParameter, "type of an empty sequence");
  t.q.resize(counts.size());
  t.log_size = std::lgamma(static_cast<double>(n) + 1.0);
  double logp = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    t.q[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    t.log_size -= std::lgamma(static_cast<double>(counts[i]) + 1.0);
    if (counts[i] > 0) logp += counts[i] * std::log(p[i]);
  }
  t.size = multinomial(counts);
  if (t.size != 0) t.log_size = std::log(static_cast<double>(t.size));
  t.prob = std::exp(t.log_size + logp);
  t.kl = kl_divergence(t.q, p.probs());
  return t;
}

std::vector<TypeClass> enumerate_types(unsigned n, const Pmf& p) {
  std::vector<TypeClass> out;
  for (const auto& c : enumerate_compositions(n, p.size())) out.push_back(make_type(c, p));
  return out;
}

std::vector<unsigned> composition_of(std::uint64_t index, unsigned n, std::size_t k) {
  std::vector<unsigned> c(k, 0);
  for (unsigned i = 0; i < n; ++i) {
    ++c[index % k];
    index /= k;
  }
  return c;
}

}  // namespace mleak
