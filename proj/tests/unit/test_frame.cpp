#include "framepot/error.hpp"
#include "framepot/frame.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace fp = framepot;

namespace {

Eigen::MatrixXd random_unit_columns(int d, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(d, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) x(i, j) = g(rng);
    x.col(j).normalize();
  }
  return x;
}

// Sum over ordered pairs i != j, computed straight from the vectors.
double energy_by_hand(const Eigen::MatrixXd& x, double p) {
  double e = 0.0;
  for (int i = 0; i < x.cols(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      if (i == j) continue;
      double dot = 0.0;
      for (int r = 0; r < x.rows(); ++r) dot += x(r, i) * x(r, j);
      e += std::pow(std::abs(dot), p);
    }
  }
  return e;
}

}  // namespace

TEST(Exponent, RejectsNonPositive) {
  EXPECT_THROW(fp::Exponent(0.0), fp::DomainError);
  EXPECT_THROW(fp::Exponent(-1.0), fp::DomainError);
  EXPECT_THROW(fp::Exponent(std::nan("")), fp::DomainError);
  EXPECT_TRUE(fp::Exponent(1.5).in_bound_range());
  EXPECT_FALSE(fp::Exponent(2.5).in_bound_range());
}

TEST(Configuration, RejectsNonUnitVectorAndNamesIt) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(2, 3);
  x(0, 2) = 0.5;
  try {
    fp::Configuration::from_columns(x);
    FAIL() << "expected ValidationError";
  } catch (const fp::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("vector 2"), std::string::npos) << e.what();
  }
}

TEST(Configuration, NormalizedRescalesColumns) {
  Eigen::MatrixXd x(2, 2);
  x << 3.0, 0.0, 4.0, 2.0;
  const auto c = fp::Configuration::normalized(x);
  EXPECT_NEAR(c.vectors()(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(c.vectors()(1, 1), 1.0, 1e-15);
  EXPECT_THROW(fp::Configuration::normalized(Eigen::MatrixXd::Zero(2, 1)), fp::ValidationError);
}

TEST(GramMatrix, ValidatesShapeDiagonalSymmetry) {
  EXPECT_THROW(fp::GramMatrix::from_entries(Eigen::MatrixXd::Ones(2, 3)), fp::ValidationError);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(1, 1) = 0.9;
  EXPECT_THROW(fp::GramMatrix::from_entries(a), fp::ValidationError);
  a = Eigen::MatrixXd::Identity(3, 3);
  a(0, 1) = 0.2;
  EXPECT_THROW(fp::GramMatrix::from_entries(a), fp::ValidationError);
  a(1, 0) = 0.2;
  EXPECT_NO_THROW(fp::GramMatrix::from_entries(a));
}

TEST(FrameEnergy, OrthonormalBasisIsZero) {
  const auto c = fp::Configuration::from_columns(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(fp::frame_energy(fp::gram_of(c), fp::Exponent(1.3)), 0.0);
}

TEST(FrameEnergy, RepeatedOrthoCountsOrderedPairs) {
  // d = 3, N = 4: one duplicated vector contributes the pair twice.
  const auto c = fp::repeated_ortho_config(3, 4);
  for (double p : {1.0, 1.3, 2.0, 5.0}) {
    EXPECT_DOUBLE_EQ(fp::frame_energy(fp::gram_of(c), fp::Exponent(p)), 2.0);
  }
  // N = d + m with m <= d gives 2m.
  for (int m = 1; m <= 4; ++m) {
    const auto r = fp::repeated_ortho_config(5, 5 + m);
    EXPECT_DOUBLE_EQ(fp::frame_energy(fp::gram_of(r), fp::Exponent(1.1)), 2.0 * m);
  }
}

TEST(FrameEnergy, MultiplicityPattern) {
  const std::vector<int> mult{2, 3};  // {e1, e1, e2, e2, e2}
  EXPECT_DOUBLE_EQ(fp::multiplicity_energy(mult), 8.0);
  Eigen::MatrixXd x(2, 5);
  x << 1, 1, 0, 0, 0, 0, 0, 1, 1, 1;
  EXPECT_DOUBLE_EQ(energy_by_hand(x, 1.7), 8.0);
  const auto c = fp::Configuration::from_columns(x);
  EXPECT_DOUBLE_EQ(fp::frame_energy(fp::gram_of(c), fp::Exponent(1.7)), 8.0);
}

TEST(FrameEnergy, RepeatedOrthoMultiplicitiesMatchConfig) {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 1; n <= 11; ++n) {
      const auto mult = fp::repeated_ortho_multiplicities(d, n);
      ASSERT_EQ(static_cast<int>(mult.size()), d);
      EXPECT_EQ(std::accumulate(mult.begin(), mult.end(), 0), n);
      EXPECT_LE(*std::max_element(mult.begin(), mult.end()) -
                    *std::min_element(mult.begin(), mult.end()),
                1);
      const auto c = fp::repeated_ortho_config(d, n);
      EXPECT_DOUBLE_EQ(energy_by_hand(c.vectors(), 1.5), fp::multiplicity_energy(mult));
    }
  }
}

TEST(FrameEnergy, MatchesDirectSumOnRandomConfigs) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd x = random_unit_columns(3, 7, seed);
    const auto c = fp::Configuration::from_columns(x, 1e-12);
    for (double p : {1.0, 1.5, 2.0, 3.3}) {
      const double e = fp::frame_energy(fp::gram_of(c), fp::Exponent(p));
      EXPECT_NEAR(e, energy_by_hand(x, p), 1e-12 * std::max(1.0, e));
    }
  }
}

TEST(FrameEnergy, InvariantUnderPermutationAndSignFlips) {
  std::mt19937 rng(11);
  for (unsigned seed = 0; seed < 10; ++seed) {
    Eigen::MatrixXd x = random_unit_columns(4, 9, seed + 100);
    const double base =
        fp::frame_energy(fp::gram_of(fp::Configuration::from_columns(x)), fp::Exponent(1.4));
    std::vector<int> perm(9);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd y(4, 9);
    for (int j = 0; j < 9; ++j) y.col(j) = (j % 2 == 0 ? -1.0 : 1.0) * x.col(perm[j]);
    const double moved =
        fp::frame_energy(fp::gram_of(fp::Configuration::from_columns(y)), fp::Exponent(1.4));
    EXPECT_NEAR(base, moved, 1e-12 * base);
  }
}

TEST(FrameEnergy, NonIncreasingInP) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const auto c = fp::Configuration::from_columns(random_unit_columns(3, 6, seed + 7));
    const auto g = fp::gram_of(c);
    double prev = fp::frame_energy(g, fp::Exponent(0.5));
    for (double p = 0.6; p <= 4.0; p += 0.1) {
      const double e = fp::frame_energy(g, fp::Exponent(p));
      EXPECT_LE(e, prev + 1e-12);
      prev = e;
    }
  }
}

TEST(ValidateRank, RepeatedOrthoHasRankD) {
  const auto g = fp::gram_of(fp::repeated_ortho_config(3, 5));
  const auto r = fp::validate_rank(g, 3);
  EXPECT_EQ(r.rank, 3);
  EXPECT_TRUE(r.within_bound);
  EXPECT_EQ(static_cast<int>(r.singular_values.size()), 5);
  EXPECT_TRUE(std::is_sorted(r.singular_values.rbegin(), r.singular_values.rend()));
  EXPECT_FALSE(fp::validate_rank(g, 2).within_bound);
  EXPECT_NEAR(g.min_eigenvalue(), 0.0, 1e-12);
}
