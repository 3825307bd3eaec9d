#pragma once

// Simplex relaxation of the frame energy.
//
//   f_{c,p}(t) = (t / (c - t))^{p/2},    0 <= t < c
//   M(c, p, N) = min { sum_i f_{c,p}(t_i) : sum_i t_i = 1, t_i in [0, c) }
//
// For any rank-d N x N unit-diagonal A and 1 <= p <= 2,
// E_p(A) >= M(1/(N-d), p, N). The minimum is attained at one of two
// structured points:
//
//   uniform: t_1 = ... = t_k = 1/k, rest 0,              1/k >= a
//   split:   t_1 = ... = t_k = x, t_{k+1} = 1 - kx, rest 0,
//            x >= a, 0 < 1 - kx < a
//
// with threshold a = c (1/2 - p/4), the inflection point of f_{c,p}.

#include "framepot/frame.hpp"

#include <optional>

namespace framepot {

/// Validated (c, p, N) with c > 1/N (otherwise the feasible set is empty).
class RelaxationProblem {
 public:
  RelaxationProblem(double cap, double p, int count);

  double cap() const noexcept { return cap_; }
  double p() const noexcept { return p_; }
  int count() const noexcept { return count_; }
  /// c * (1/2 - p/4); non-positive for p >= 2.
  double threshold() const noexcept { return cap_ * (0.5 - p_ / 4.0); }

 private:
  double cap_;
  double p_;
  int count_;
};

enum class CandidateCase { kUniform, kSplit };

struct RelaxationCandidate {
  CandidateCase kind = CandidateCase::kUniform;
  int k = 0;
  double x = 0.0;  // split case only; 1/k for uniform
  double value = 0.0;
};

/// (t/(c-t))^{p/2}; +infinity for t >= c. Throws DomainError for t < 0.
double f_relax(double cap, double p, double t);

/// k * f(1/k); +infinity when 1/k >= c.
double case_i_value(const RelaxationProblem& problem, int k);

/// k f(x) + f(1 - kx) at the simplex point (x, ..., x, 1 - kx, 0, ...).
/// Throws DomainError when x < 0 or 1 - kx < 0 (beyond rounding).
double case_ii_value(const RelaxationProblem& problem, int k, double x);

struct SplitInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Closure of the feasible x-range of the split case for this k, or
/// nullopt when empty (including all k when the threshold is <= 0).
std::optional<SplitInterval> split_interval(const RelaxationProblem& problem, int k);

struct LineMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search plus a 1000-point safety grid and both endpoints.
/// nullopt signals that the split case is infeasible for k.
std::optional<LineMinimum> minimize_case_ii(const RelaxationProblem& problem, int k);

struct RelaxationOptimum {
  double value = 0.0;
  RelaxationCandidate argmin;
  /// Candidates satisfying the threshold constraints but excluded by the cap.
  int rejected_by_cap = 0;
};

/// M(c, p, N) over the structured candidates. Throws SolverError if no
/// candidate is feasible.
RelaxationOptimum relaxation_minimum(const RelaxationProblem& problem);

inline constexpr int kBruteForceMaxCount = 5;

/// Exhaustive scan of the simplex at resolution 1/grid_steps. Independent
/// of the structured-candidate route. Refuses N > 5 (PreconditionError) and
/// throws SolverError when no grid point satisfies the cap.
double relaxation_bruteforce(const RelaxationProblem& problem, int grid_steps);

struct BoundReport {
  double energy = 0.0;
  double relaxation = 0.0;
  double slack = 0.0;
  bool pass = false;
  int rank = 0;
};

inline constexpr double kBoundTolerance = 1e-9;

/// Checks E_p(A) >= M(1/(N-d), p, N). Requires p in [1,2], N > d and
/// numerical rank(A) <= d; violations throw PreconditionError.
BoundReport check_bound(const GramMatrix& gram, int dimension, double p);

}  // namespace framepot
