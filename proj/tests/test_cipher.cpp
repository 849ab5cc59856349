#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mleak/cipher.hpp"
#include "mleak/error.hpp"
#include "mleak/random.hpp"
#include "mleak/rate_distortion.hpp"
#include "mleak/types.hpp"
#include "support.hpp"

using namespace mleak;
using namespace mleak::testing;

namespace {

double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1 - p) * std::log2(1 - p));
}

// Hamming R(Q,D) for a uniform m-ary source, bits.
double uniform_hamming_rd_bits(double m, double level) {
  if (level >= 1.0 - 1.0 / m) return 0.0;
  return std::log2(m) - h2(level) - level * std::log2(m - 1.0);
}

CipherParams params(unsigned n, double p, double level, double r, double alpha) {
  CipherParams c;
  c.n = n;
  c.source = bernoulli(p);
  c.spec = DistortionSpec::hamming(2, level);
  c.key_rate_bits = r;
  c.alpha_bits = alpha;
  c.seed = 17;
  return c;
}

double binom(unsigned n, unsigned k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

}  // namespace

TEST(Types, Enumeration) {
  EXPECT_EQ(enumerate_compositions(4, 2).size(), 5u);
  EXPECT_EQ(enumerate_compositions(5, 3).size(), 21u);
  Pmf p(std::vector<double>{.2, .3, .5});
  auto types = enumerate_types(6, p);
  double prob = 0.0;
  std::uint64_t count = 0;
  for (const auto& t : types) {
    prob += t.prob;
    count += t.size;
    unsigned s = 0;
    for (unsigned c : t.counts) s += c;
    EXPECT_EQ(s, 6u);
    EXPECT_NEAR(std::log(static_cast<double>(t.size)), t.log_size, 1e-12);
  }
  EXPECT_NEAR(prob, 1.0, 1e-12);
  EXPECT_EQ(count, 729u);
  TypeClass t = make_type({2, 1, 3}, p);
  EXPECT_EQ(t.size, 60u);
  EXPECT_NEAR(t.kl, kl_divergence(Pmf(std::vector<double>{2.0 / 6, 1.0 / 6, 3.0 / 6}), p), 1e-15);
  EXPECT_EQ(composition_of(0b1011, 4, 2), (std::vector<unsigned>{1, 3}));
  EXPECT_EQ(composition_of(5 + 2 * 3, 3, 3), (std::vector<unsigned>{1, 1, 1}));
}

TEST(RateDistortion, BinaryHamming) {
  EXPECT_NEAR(rate_distortion(bernoulli(0.5), DistortionSpec::hamming(2, 0), 0.1) / kLn2, 1 - h2(0.1), 1e-7);
  EXPECT_NEAR(1 - h2(0.1), 0.53101, 1e-5);
  EXPECT_EQ(rate_distortion(bernoulli(0.3), DistortionSpec::hamming(2, 0), 0.3), 0.0);
  EXPECT_EQ(rate_distortion(bernoulli(0.3), DistortionSpec::hamming(2, 0), 0.45), 0.0);
  EXPECT_NEAR(rate_distortion(bernoulli(0.3), DistortionSpec::hamming(2, 0), 0.0) / kLn2, h2(0.3), 1e-7);
  for (double q : {0.1, 0.2, 0.35, 0.5})
    for (double level : {0.01, 0.05, 0.09})
      EXPECT_NEAR(rate_distortion(bernoulli(q), DistortionSpec::hamming(2, 0), level) / kLn2, h2(q) - h2(level),
                  1e-7);
}

TEST(RateDistortion, UniformMaryHamming) {
  for (std::size_t m : {3, 4}) {
    for (double level : {0.0, 0.1, 0.3, 0.5}) {
      double v = rate_distortion(Pmf::uniform(m), DistortionSpec::hamming(m, 0), level) / kLn2;
      EXPECT_NEAR(v, uniform_hamming_rd_bits(static_cast<double>(m), level), 1e-7) << m << " " << level;
    }
  }
}

TEST(RateDistortion, ConvexNonincreasingAndZeroAtMax) {
  Rng rng = make_rng(501);
  for (int t = 0; t < 10; ++t) {
    Pmf q = random_pmf(rng, 3);
    Matrix d(3, 3);
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y) d(x, y) = x == y ? 0.0 : 0.2 + uniform01(rng);
    DistortionSpec spec{d, 0.0};
    double dmax = spec.d_max();
    EXPECT_NEAR(rate_distortion(q, spec, dmax), 0.0, 1e-9);
    std::vector<double> r;
    for (int k = 0; k <= 16; ++k) r.push_back(rate_distortion(q, spec, dmax * k / 16.0));
    for (std::size_t k = 1; k < r.size(); ++k) EXPECT_LE(r[k], r[k - 1] + 1e-8);
    for (std::size_t k = 1; k + 1 < r.size(); ++k) EXPECT_LE(r[k], 0.5 * (r[k - 1] + r[k + 1]) + 1e-7);
  }
  EXPECT_EQ([] {
    try {
      rate_distortion(bernoulli(0.3), DistortionSpec{Matrix{{0.1, 1}, {1, 0.1}}, 0}, 0.05);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidParameter;
  }(), ErrorKind::Infeasible);
}

TEST(SingleLetter, Fixtures) {
  DistortionSpec ham = DistortionSpec::hamming(2, 0.1);
  EXPECT_NEAR(single_letter_limit(bernoulli(0.5), ham, 0.1, 0.2, 0.0).value_bits, 1 - h2(0.1) - 0.2, 1e-7);
  EXPECT_NEAR(1 - h2(0.1) - 0.2, 0.33101, 1e-5);
  EXPECT_EQ(single_letter_limit(bernoulli(0.3), ham, 0.1, 1.0, 0.5).value_bits, 0.0);
  EXPECT_NEAR(single_letter_limit(bernoulli(0.2), ham, 0.1, 0.2, kInf).value_bits, 1 - h2(0.1) - 0.2, 1e-7);

  SingleLetterResult v = single_letter_limit(bernoulli(0.5), ham, 0.1, 0.2, 0.0, 1e-7, 0.3);
  EXPECT_TRUE(v.rate_assumption_violated);
}

TEST(SingleLetter, BinaryBallMatchesDenseGrid) {
  // Over the KL ball around Ber(p), R(q,D) = h2(q) - h2(D) is largest at the q closest to 1/2.
  for (double p : {0.1, 0.2, 0.3}) {
    for (double alpha : {0.02, 0.1, 0.3}) {
      double level = 0.05, r = 0.1, best = 0.0;
      for (int i = 0; i <= 200000; ++i) {
        double q = i / 200000.0;
        double kl = (q > 0 ? q * std::log2(q / p) : 0.0) + (q < 1 ? (1 - q) * std::log2((1 - q) / (1 - p)) : 0.0);
        if (kl <= alpha) best = std::max(best, std::max(0.0, h2(q) - h2(std::min(level, std::min(q, 1 - q)))) - r);
      }
      double v = single_letter_limit(bernoulli(p), DistortionSpec::hamming(2, level), level, r, alpha).value_bits;
      EXPECT_NEAR(v, std::max(0.0, best), 2e-5) << p << " " << alpha;
      EXPECT_GE(v, std::max(0.0, best) - 1e-7);
    }
  }
}

TEST(SingleLetter, TernaryUniformCenter) {
  // Uniform source is the R-maximizer for Hamming, so any ball around it peaks at the centre.
  DistortionSpec ham = DistortionSpec::hamming(3, 0.1);
  double v = single_letter_limit(Pmf::uniform(3), ham, 0.1, 0.2, 0.1).value_bits;
  EXPECT_NEAR(v, uniform_hamming_rd_bits(3, 0.1) - 0.2, 1e-6);
}

TEST(Scheme, ZeroDistortionCodebooksAreTypeClasses) {
  CipherParams c = params(4, 0.5, 0.0, 0.0, 10.0);
  CipherScheme s = CipherScheme::build(c);
  for (std::size_t t = 0; t < s.types().size(); ++t) {
    ASSERT_TRUE(s.feasible(t));
    std::set<std::uint64_t> book(s.codebook(t).begin(), s.codebook(t).end()), members;
    for (std::uint64_t x = 0; x < 16; ++x)
      if (s.type_of(x) == t) members.insert(x);
    EXPECT_EQ(book, members);
  }
  EXPECT_NEAR(std::exp(exact_scheme_leakage(s).nats()), 16.0, 1e-9);
  EXPECT_EQ(excess_distortion_prob(s), 0.0);
}

TEST(Scheme, NoKeyOneBinPerCodeword) {
  CipherParams c = params(8, 0.5, 0.25, 0.0, 0.05);
  CipherScheme s = CipherScheme::build(c);
  EXPECT_EQ(s.key_bits(), 0u);
  double total = 0.0;
  bool infeasible = false;
  for (std::size_t t = 0; t < s.types().size(); ++t) {
    if (s.feasible(t)) {
      EXPECT_EQ(s.bins(t), s.codebook(t).size());
      total += static_cast<double>(s.codebook(t).size());
    } else {
      infeasible = true;
    }
  }
  ASSERT_TRUE(infeasible);
  EXPECT_NEAR(exact_scheme_leakage(s).nats(), std::log(1.0 + total), 1e-12);
  EXPECT_NEAR(brute_force_scheme_leakage(s).nats(), exact_scheme_leakage(s).nats(), 1e-12);
}

TEST(Scheme, HugeKeySingleBinPerType) {
  CipherParams c = params(8, 0.5, 0.25, 1.0, 0.05);
  CipherScheme s = CipherScheme::build(c);
  std::size_t feasible = 0;
  for (std::size_t t = 0; t < s.types().size(); ++t)
    if (s.feasible(t)) {
      ++feasible;
      EXPECT_EQ(s.bins(t), 1u);
    }
  EXPECT_LT(feasible, s.types().size());
  EXPECT_NEAR(exact_scheme_leakage(s).nats(), std::log(1.0 + feasible), 1e-12);
}

TEST(Scheme, ReconstructionAndCoverageExhaustive) {
  for (unsigned n : {4u, 6u, 8u}) {
    for (double level : {0.0, 0.25}) {
      CipherParams c = params(n, 0.5, level, 0.25, 0.05);
      CipherScheme s = CipherScheme::build(c);
      EXPECT_EQ(s.key_bits(), static_cast<unsigned>(std::ceil(n * 0.25)));
      for (std::uint64_t x = 0; x < s.num_sequences(); ++x) {
        if (!s.feasible(s.type_of(x))) {
          EXPECT_TRUE(s.encode(x, 0).dummy);
          continue;
        }
        std::uint64_t cw = s.codeword_of(x);
        EXPECT_LE(s.sequence_distortion(x, cw), level + 1e-12);
        for (std::uint64_t k = 0; k < s.bin_size(); ++k) {
          Message m = s.encode(x, k);
          EXPECT_FALSE(m.dummy);
          EXPECT_EQ(s.decode(m, k), cw);
        }
      }
      // Bins partition each codebook.
      for (std::size_t t = 0; t < s.types().size(); ++t) {
        if (!s.feasible(t)) continue;
        std::uint64_t covered = 0;
        for (std::size_t i = 0; i < s.bins(t); ++i)
          covered += std::min<std::uint64_t>(s.bin_size(), s.codebook(t).size() - i * s.bin_size());
        EXPECT_EQ(covered, s.codebook(t).size());
      }
    }
  }
}

TEST(Scheme, CountingMatchesBruteForce) {
  for (unsigned n : {4u, 6u, 8u})
    for (double r : {0.0, 0.25, 0.5})
      for (double p : {0.5, 0.3}) {
        CipherScheme s = CipherScheme::build(params(n, p, 0.25, r, 0.05));
        EXPECT_NEAR(brute_force_scheme_leakage(s).nats(), exact_scheme_leakage(s).nats(), 1e-12)
            << n << " " << r << " " << p;
      }
}

TEST(Scheme, DeterministicGivenSeed) {
  CipherScheme a = CipherScheme::build(params(10, 0.5, 0.25, 0.25, 0.05));
  CipherScheme b = CipherScheme::build(params(10, 0.5, 0.25, 0.25, 0.05));
  for (std::size_t t = 0; t < a.types().size(); ++t) EXPECT_EQ(a.codebook(t), b.codebook(t));
}

TEST(Scheme, RebuildFromCodebooks) {
  CipherParams c = params(8, 0.5, 0.25, 0.25, 0.05);
  CipherScheme s = CipherScheme::build(c);
  std::vector<std::vector<std::uint64_t>> books;
  for (std::size_t t = 0; t < s.types().size(); ++t) books.push_back(s.codebook(t));
  CipherScheme r = CipherScheme::from_codebooks(c, books);
  EXPECT_EQ(exact_scheme_leakage(r).nats(), exact_scheme_leakage(s).nats());
  for (std::uint64_t x = 0; x < r.num_sequences(); ++x) {
    if (!r.feasible(r.type_of(x))) continue;
    EXPECT_LE(r.sequence_distortion(x, r.codeword_of(x)), 0.25 + 1e-12);
    EXPECT_EQ(r.decode(r.encode(x, 3), 3), r.codeword_of(x));
  }
  // Dropping a codeword from a type that needs it breaks coverage.
  for (std::size_t t = 0; t < books.size(); ++t)
    if (s.feasible(t) && books[t].size() > 1) {
      books[t].pop_back();
      break;
    }
  EXPECT_THROW(CipherScheme::from_codebooks(c, books), Error);
}

TEST(Scheme, ExcessDistortion) {
  CipherScheme all = CipherScheme::build(params(8, 0.5, 0.25, 0.25, 50.0));
  EXPECT_EQ(excess_distortion_prob(all), 0.0);

  CipherScheme tight = CipherScheme::build(params(8, 0.5, 0.25, 0.25, 0.0));
  double infeasible_mass = 0.0;
  for (std::size_t t = 0; t < tight.types().size(); ++t)
    if (!tight.feasible(t)) infeasible_mass += tight.types()[t].prob;
  double e = excess_distortion_prob(tight);
  EXPECT_GT(e, 0.0);
  EXPECT_LE(e, infeasible_mass + 1e-15);

  CipherParams c = params(12, 0.5, 0.25, 0.25, 0.05);
  c.delta_bits = 0.02;
  CipherScheme s = CipherScheme::build(c);
  // The constant output is all zeros (lowest index on the Hamming tie), so an
  // infeasible type exceeds D exactly when its count of ones exceeds nD.
  double m = 0.0;
  for (std::size_t t = 0; t < s.types().size(); ++t)
    if (!s.feasible(t) && s.types()[t].counts[1] > 3) m += s.types()[t].prob;
  EXPECT_NEAR(excess_distortion_prob(s), m, 1e-12);
  EXPECT_GT(m, 0.0);

  CipherScheme dmax = CipherScheme::build(params(8, 0.5, 1.0, 0.25, 0.0));
  EXPECT_EQ(excess_distortion_prob(dmax), 0.0);
}

TEST(Scheme, NormalizedLeakageAboveLimit) {
  double limit = single_letter_limit(bernoulli(0.5), DistortionSpec::hamming(2, 0.25), 0.25, 0.25, 0.05).value_bits;
  for (unsigned n : {8u, 12u}) {
    CipherScheme s = CipherScheme::build(params(n, 0.5, 0.25, 0.25, 0.05));
    double per = exact_scheme_leakage(s).bits() / n;
    EXPECT_GE(per, limit - 1e-9);
    EXPECT_LE(per - limit, (2 * std::log2(n + 1.0) + 2) / n);
  }
}

TEST(Scheme, Errors) {
  CipherParams big = params(24, 0.5, 0.25, 0.25, 0.05);
  EXPECT_THROW(CipherScheme::build(big), Error);
  try {
    CipherScheme::build(big);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeCapExceeded);
  }
  (void)binom;
}
