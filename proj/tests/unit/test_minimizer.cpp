#include "framepot/error.hpp"
#include "framepot/frame.hpp"
#include "framepot/minimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace fp = framepot;

namespace {

fp::MinimizeOptions small_options(int restarts, std::uint64_t seed = 0, int threads = 1) {
  fp::MinimizeOptions o;
  o.restarts = restarts;
  o.max_iterations = 2000;
  o.seed = seed;
  o.threads = threads;
  return o;
}

double exact_energy(const fp::Configuration& c, double p) {
  return fp::frame_energy(fp::gram_of(c), fp::Exponent(p));
}

}  // namespace

TEST(SmoothedEnergy, ConvergesToExactWithinPairBound) {
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto c = fp::random_configuration(3, 6, 42, r);
    for (double p : {1.0, 1.5, 2.0}) {
      const double e = exact_energy(c, p);
      for (double s : {1e-1, 1e-3, 1e-6}) {
        const double es = fp::smoothed_energy(c, p, s);
        EXPECT_GE(es, e - 1e-12);
        EXPECT_LE(es - e, 36.0 * std::pow(s, p) + 1e-12);
      }
      EXPECT_NEAR(fp::smoothed_energy(c, p, 0.0), e, 1e-12 * std::max(1.0, e));
    }
  }
}

TEST(EnergyGradient, MatchesFiniteDifferenceAlongTangentDirections) {
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = fp::random_configuration(3, 5, 1234, static_cast<std::uint64_t>(trial));
    const double p = 1.0 + trial / 49.0;
    const double s = 1e-3;
    const Eigen::MatrixXd grad = fp::energy_gradient(c, p, s);
    Eigen::MatrixXd v(3, 5);
    for (int i = 0; i < v.size(); ++i) v.data()[i] = g(rng);
    for (int j = 0; j < 5; ++j) {
      const Eigen::VectorXd x = c.vectors().col(j);
      v.col(j) -= x.dot(v.col(j)) * x;
      EXPECT_NEAR(grad.col(j).dot(x), 0.0, 1e-12);
    }
    const double h = 1e-6;
    const auto plus = fp::Configuration::normalized(c.vectors() + h * v);
    const auto minus = fp::Configuration::normalized(c.vectors() - h * v);
    const double fd = (fp::smoothed_energy(plus, p, s) - fp::smoothed_energy(minus, p, s)) / (2 * h);
    const double an = (grad.array() * v.array()).sum();
    EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(an))) << "trial " << trial;
  }
}

TEST(RandomConfiguration, DeterministicPerRestart) {
  const auto a = fp::random_configuration(4, 7, 5, 3);
  const auto b = fp::random_configuration(4, 7, 5, 3);
  const auto c = fp::random_configuration(4, 7, 5, 4);
  EXPECT_EQ(a.vectors(), b.vectors());
  EXPECT_NE(a.vectors(), c.vectors());
  for (int j = 0; j < 7; ++j) EXPECT_NEAR(a.vectors().col(j).norm(), 1.0, 1e-15);
}

TEST(MinimizeEnergy, EqualityCaseAtPOne) {
  const auto r = fp::minimize_energy(3, 4, 1.0, small_options(16));
  EXPECT_NEAR(r.best_energy, 2.0, 1e-6);
  EXPECT_NEAR(exact_energy(r.best_config, 1.0), r.best_energy, 1e-12);
}

TEST(MinimizeEnergy, TightFrameValueAtPTwo) {
  for (auto [d, n] : {std::pair{2, 4}, std::pair{2, 6}, std::pair{3, 6}, std::pair{2, 5}}) {
    const auto r = fp::minimize_energy(d, n, 2.0, small_options(8));
    EXPECT_NEAR(r.best_energy, double(n) * n / d - n, 1e-4) << d << " " << n;
  }
}

TEST(MinimizeEnergy, IndependentOfThreadCount) {
  const auto a = fp::minimize_energy(2, 5, 1.6, small_options(6, 77, 1));
  const auto b = fp::minimize_energy(2, 5, 1.6, small_options(6, 77, 3));
  EXPECT_EQ(a.per_restart_energies, b.per_restart_energies);
  EXPECT_EQ(a.best_restart, b.best_restart);
  EXPECT_EQ(a.best_config.vectors(), b.best_config.vectors());
}

TEST(MinimizeEnergy, MoreRestartsNeverWorse) {
  const auto a = fp::minimize_energy(2, 6, 1.5, small_options(3, 2));
  const auto b = fp::minimize_energy(2, 6, 1.5, small_options(9, 2));
  EXPECT_LE(b.best_energy, a.best_energy);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a.per_restart_energies[i], b.per_restart_energies[i]);
}

TEST(MinimizeEnergy, Preconditions) {
  EXPECT_THROW(fp::minimize_energy(2, 5, 0.5, small_options(2)), fp::PreconditionError);
  EXPECT_THROW(fp::minimize_energy(2, 5, 1.5, small_options(0)), fp::PreconditionError);
}

TEST(OrthoReference, MultiplicityCount) {
  EXPECT_DOUBLE_EQ(fp::ortho_reference_energy(2, 5), 8.0);
  EXPECT_DOUBLE_EQ(fp::ortho_reference_energy(2, 7), 18.0);
  EXPECT_DOUBLE_EQ(fp::ortho_reference_energy(3, 4), 2.0);
}

TEST(ThresholdBisect, ReportsMissingCrossing) {
  // At p = 2 the orthonormal pattern for (2, 4) is already a tight frame.
  const auto e = fp::threshold_bisect(2, 4, 1.0, 2.0, 1e-2, small_options(4));
  EXPECT_EQ(e.status, fp::ThresholdStatus::kNoCrossing);
}

TEST(ThresholdBisect, BracketsFivePointTransition) {
  const auto e = fp::threshold_bisect(2, 5, 1.5, 2.0, 1e-2, small_options(16));
  ASSERT_EQ(e.status, fp::ThresholdStatus::kFound);
  EXPECT_LE(e.p_hi - e.p_lo, 1e-2);
  EXPECT_NEAR(e.p_estimate, 1.7776625188701859, 1e-2);
}

TEST(ConjectureScan, ShapeAndSkippedCells) {
  auto o = small_options(4);
  o.max_iterations = 800;
  const auto t = fp::conjecture_scan({2}, {1, 7}, {1}, 0.05, o);
  ASSERT_EQ(t.cells.size(), 2u);
  EXPECT_TRUE(t.cells[0].error.empty());
  EXPECT_DOUBLE_EQ(t.cells[0].ortho_value, t.cells[0].formula_value);
  EXPECT_FALSE(t.cells[1].error.empty());  // N = 15 exceeds the scan limit
}
