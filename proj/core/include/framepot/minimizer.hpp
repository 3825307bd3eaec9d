#pragma once

// Randomized multi-start descent of E_p over N unit vectors in R^d.
//
// Each restart draws a uniform random configuration and runs projected
// gradient descent with Armijo backtracking and renormalization as the
// retraction. For p < 2 the energy is not differentiable at zero inner
// products, so descent runs on the smoothed energy
//
//   E_s(X) = sum_{i != j} (<x_i, x_j>^2 + s^2)^{p/2}
//
// with s decreasing geometrically. Restart r draws from its own generator
// seeded from (seed, r), so reports do not depend on thread count.

#include "framepot/frame.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace framepot {

struct MinimizeOptions {
  int restarts = 64;
  int max_iterations = 5000;
  double step_tolerance = 1e-12;
  double smoothing_start = 1e-2;
  double smoothing_end = 1e-9;
  std::uint64_t seed = 0;
  /// Worker threads for restarts; 0 selects hardware concurrency.
  int threads = 0;

  /// Throws PreconditionError on inconsistent values.
  void validate() const;
};

struct MinimizationReport {
  Configuration best_config;
  double best_energy = 0.0;
  int best_restart = 0;
  std::vector<double> per_restart_energies;
  std::vector<int> iterations_used;
  std::vector<bool> converged;
};

double smoothed_energy(const Configuration& config, double p, double smoothing);

/// Riemannian gradient of the smoothed energy: column i is
///   2p sum_{j != i} t_ij (t_ij^2 + s^2)^{(p-2)/2} x_j
/// projected onto the tangent space at x_i.
Eigen::MatrixXd energy_gradient(const Configuration& config, double p, double smoothing);

/// Uniform random configuration for restart `restart` of `seed`.
Configuration random_configuration(int dimension, int count, std::uint64_t seed,
                                   std::uint64_t restart);

MinimizationReport minimize_energy(int dimension, int count, double p,
                                   const MinimizeOptions& options);

/// Energy of the repeated orthonormal sequence, used as the reference value.
double ortho_reference_energy(int dimension, int count);

inline constexpr double kDecisionMargin = 1e-7;

enum class ThresholdStatus {
  kFound,         // bracket narrowed to tolerance
  kNoCrossing,    // reference value not beaten at p_hi
  kBeatenAtLow,   // reference value already beaten at p_lo
};

struct ThresholdEstimate {
  ThresholdStatus status = ThresholdStatus::kFound;
  double p_lo = 0.0;
  double p_hi = 0.0;
  double p_estimate = 0.0;  // bracket midpoint
  double ortho_value = 0.0;
  double best_energy_at_p_lo = 0.0;
  double best_energy_at_p_hi = 0.0;
  int bisection_steps = 0;
};

/// Bisection on p for the point where minimize_energy first beats the
/// repeated orthonormal sequence by more than kDecisionMargin.
ThresholdEstimate threshold_bisect(int dimension, int count, double p_lo, double p_hi,
                                   double tolerance, const MinimizeOptions& options);

std::string to_string(ThresholdStatus status);

struct ScanCell {
  int d = 0;
  int k = 0;
  int m = 0;
  int count = 0;
  double ortho_value = 0.0;          // direct multiplicity count
  double formula_value = 0.0;        // d(k^2 - k) + 2k
  std::optional<ThresholdEstimate> estimate;
  std::string error;                 // non-empty when the cell was skipped
};

struct ScanTable {
  double p_lo = 1.0;
  double p_hi = 2.0;
  double tolerance = 0.0;
  MinimizeOptions options;
  std::vector<ScanCell> cells;
  /// Per k: whether all found estimates agree within 2 * tolerance.
  std::vector<std::pair<int, bool>> agreement_by_k;
  /// Whether the mean estimate increases with k across the scanned k.
  bool increasing_in_k = false;
};

inline constexpr int kScanMaxCount = 12;

/// Threshold estimates for every (d, k, m) cell with 1 <= m < d and
/// N = m + k d <= kScanMaxCount. Invalid cells are recorded, not thrown.
ScanTable conjecture_scan(const std::vector<int>& d_list, const std::vector<int>& k_list,
                          const std::vector<int>& m_list, double tolerance,
                          const MinimizeOptions& options, double p_lo = 1.0, double p_hi = 2.0);

}  // namespace framepot
