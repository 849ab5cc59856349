#include <gtest/gtest.h>

#include <cmath>

#include "mleak/error.hpp"
#include "mleak/metrics.hpp"
#include "mleak/sparse.hpp"
#include "support.hpp"

using namespace mleak;
using namespace mleak::testing;

TEST(CrossingExample, DenseAndSparseAgreeAtNOne) {
  SparseJoint y = crossing_y(1), z = crossing_z(1);
  JointPmf dy = to_dense(y), dz = to_dense(z);
  EXPECT_NEAR(maximal_leakage(y).nats(), maximal_leakage(dy).nats(), 1e-12);
  EXPECT_NEAR(maximal_leakage(z).nats(), maximal_leakage(dz).nats(), 1e-12);
  EXPECT_NEAR(mutual_information(y), mutual_information(dy), 1e-12);
  EXPECT_NEAR(mutual_information(z), mutual_information(dz), 1e-12);
  EXPECT_NEAR(maximal_leakage(y).nats(), std::log(33.0), 1e-12);
  EXPECT_NEAR(maximal_leakage(z).nats(), 2 * std::log(2.0), 1e-12);
}

TEST(CrossingExample, NTwo) {
  SparseJoint y = crossing_y(2), z = crossing_z(2);
  double ly = maximal_leakage(y).nats(), lz = maximal_leakage(z).nats();
  EXPECT_NEAR(ly, std::log(8193.0), 1e-9);
  EXPECT_NEAR(lz, 3 * std::log(2.0), 1e-9);
  EXPECT_GT(ly, lz);
  // I(X;Y) = H(Y) = 2 + (7/8) log2(8/7) bits; I(X;Z) = 3 bits.
  double iy = mutual_information(y), iz = mutual_information(z);
  EXPECT_NEAR(iy / kLn2, 2.0 + 0.875 * std::log2(8.0 / 7.0), 1e-9);
  EXPECT_NEAR(iz / kLn2, 3.0, 1e-9);
  EXPECT_LT(iy, iz);
}

TEST(Sparse, RoundTripOnRandomJoints) {
  Rng rng = make_rng(601);
  for (int t = 0; t < 50; ++t) {
    JointPmf j = random_joint(rng, 2 + rng() % 5, 2 + rng() % 5, 0.4);
    SparseJoint s = to_sparse(j);
    JointPmf back = to_dense(s);
    for (std::size_t x = 0; x < j.nx(); ++x)
      for (std::size_t y = 0; y < j.ny(); ++y) EXPECT_NEAR(back(x, y), j(x, y), 1e-15);
    EXPECT_NEAR(maximal_leakage(s).nats(), maximal_leakage(j).nats(), 1e-12);
    EXPECT_NEAR(mutual_information(s), mutual_information(j), 1e-12);
  }
  EXPECT_THROW(SparseJoint(2, 2, {{0, 0, 0.5}, {0, 0, 0.5}}), Error);
}

TEST(BitFlip, LeakageIsOneBitShort) {
  for (unsigned n : {1u, 2u, 5u, 8u}) {
    JointPmf j = bit_flip(n);
    EXPECT_NEAR(maximal_leakage(j).nats(), (n - 1) * std::log(2.0), 1e-12) << n;
    EXPECT_NEAR(mutual_information(j), (n - 1) * std::log(2.0), 1e-9);
  }
}
