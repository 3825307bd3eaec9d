#pragma once

// Unit-vector configurations, Gram matrices and the p-frame energy
//
//   E_p(A) = sum_{i != j} |A_ij|^p
//
// summed over ORDERED pairs, so a configuration of mutually orthogonal
// vectors with multiplicities c_1..c_r has energy sum_i c_i (c_i - 1).

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace framepot {

inline constexpr double kUnitNormTolerance = 1e-12;
inline constexpr double kGramSymmetryTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-9;
inline constexpr double kRankTolerance = 1e-10;

/// Energy exponent p > 0.
class Exponent {
 public:
  explicit Exponent(double p);

  double value() const noexcept { return p_; }
  /// True for the range [1, 2] in which the relaxation bound applies.
  bool in_bound_range() const noexcept { return p_ >= 1.0 && p_ <= 2.0; }

 private:
  double p_;
};

/// N unit vectors in R^d, stored as the columns of a d x N matrix.
class Configuration {
 public:
  /// Validates that every column has unit norm within `tolerance`;
  /// throws ValidationError naming the first offending column.
  static Configuration from_columns(Eigen::MatrixXd vectors,
                                    double tolerance = kUnitNormTolerance);
  /// Rescales every column to unit length. Zero columns are rejected.
  static Configuration normalized(Eigen::MatrixXd vectors);

  int dimension() const noexcept { return static_cast<int>(vectors_.rows()); }
  int size() const noexcept { return static_cast<int>(vectors_.cols()); }
  const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }

 private:
  explicit Configuration(Eigen::MatrixXd vectors) : vectors_(std::move(vectors)) {}
  Eigen::MatrixXd vectors_;
};

/// Symmetric N x N matrix with unit diagonal.
class GramMatrix {
 public:
  /// Throws ValidationError if `entries` is not square, symmetric or unit
  /// diagonal within `tolerance`. The diagonal is then set to exactly 1.
  static GramMatrix from_entries(Eigen::MatrixXd entries,
                                 double tolerance = kGramSymmetryTolerance);

  int order() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// Smallest eigenvalue (PSD check for Gram matrices of actual vectors).
  double min_eigenvalue() const;

 private:
  explicit GramMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}
  Eigen::MatrixXd entries_;
};

GramMatrix gram_of(const Configuration& config);

double frame_energy(const GramMatrix& gram, Exponent p);

/// Standard basis vectors cycled: vector j (0-based) is e_{j mod d}.
Configuration repeated_ortho_config(int dimension, int count);

/// Multiplicities of each basis vector in repeated_ortho_config(d, N).
std::vector<int> repeated_ortho_multiplicities(int dimension, int count);

/// sum_i c_i (c_i - 1); independent of p.
double multiplicity_energy(std::span<const int> multiplicities);

struct RankReport {
  int rank = 0;
  int bound = 0;
  bool within_bound = false;
  std::vector<double> singular_values;  // descending
};

/// Numerical rank = number of singular values > tolerance * largest.
RankReport validate_rank(const GramMatrix& gram, int dimension,
                         double tolerance = kRankTolerance);

}  // namespace framepot
