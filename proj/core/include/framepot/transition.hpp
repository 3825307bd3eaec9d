#pragma once

// Five-point family on the circle and the exponent at which it first beats
// the repeated orthonormal sequence {e1, e1, e2, e2, e2}.
//
// The family's Gram matrix (rows and columns x, x, z, y1, y2):
//
//      1   1   0   a  -a
//      1   1   0   a  -a
//      0   0   1   s   s        s = sqrt(1 - a^2)
//      a   a   s   1   b
//     -a  -a   s   b   1
//
// has rank 2 exactly when b = -1 or b = 1 - 2a^2. On the b = 1 - 2a^2
// branch, counting ordered pairs,
//
//   E_p(a) = 2 + 8 a^p + 2 (1 - 2a^2)^p + 4 (1 - a^2)^{p/2}.
//
// The transition (a*, p*) solves E_p(a) = 8 (the repeated-ortho value) and
// dE_p/da = 0 simultaneously.

#include "framepot/frame.hpp"
#include "framepot/minimizer.hpp"

#include <string_view>

namespace framepot {

/// Reference digits of the transition point (35 significant digits).
inline constexpr std::string_view kReferenceAlphaDigits = "0.43421690071432109168188584186122094";
inline constexpr std::string_view kReferencePDigits = "1.77766251887018589539510545748522601";
inline constexpr double kReferenceAlpha = 0.43421690071432109168188584186122094;
inline constexpr double kReferenceP = 1.77766251887018589539510545748522601;
/// Reported seven-point transition (minimizer evidence only).
inline constexpr double kReferenceSevenPointP = 1.840321171266;

inline constexpr double kFivePointOrthoEnergy = 8.0;

GramMatrix five_point_gram(double alpha, double beta);

/// det [[1, a, -a], [a, 1, b], [-a, b, 1]] = (1 + b)(1 - b - 2a^2).
double five_point_minor_determinant(double alpha, double beta);

struct BetaRoots {
  double negative_one = -1.0;
  double other = 0.0;  // 1 - 2 alpha^2
  double det_at_negative_one = 0.0;
  double det_at_other = 0.0;
};
BetaRoots beta_roots(double alpha);

/// Energy on the b = 1 - 2a^2 branch; requires a in [0, 1/sqrt 2], p > 0.
double five_point_energy(double alpha, double p);

/// p (8 a^{p-1} - 8 a (1-2a^2)^{p-1} - 4 a (1-a^2)^{p/2-1});
/// requires a in [0, 1/sqrt 2], p >= 1.
double five_point_energy_dalpha(double alpha, double p);

/// Local minimizer of a -> E_p(a) inside (1e-6, 1/sqrt 2 - 1e-6), found by
/// bisection on the derivative; nullopt when the family has no interior
/// local minimum at this p.
std::optional<double> stationary_alpha(double p);

struct TransitionSolution {
  double alpha = 0.0;
  double p = 0.0;
  double target = kFivePointOrthoEnergy;
  double energy_residual = 0.0;        // E_p(a) - target
  double stationarity_residual = 0.0;  // dE_p/da
  int outer_iterations = 0;
};

/// Solves {E_p(a) = target, dE_p/da = 0} by bisection in p over [1, 2]
/// around the stationary-alpha solve, then a short 2-D Newton polish.
/// Throws SolverError when [1, 2] does not bracket the crossing.
TransitionSolution solve_transition(double target = kFivePointOrthoEnergy);

struct SubthresholdWitness {
  double epsilon = 0.0;
  double alpha = 0.0;
  double p = 0.0;
  double energy = 0.0;
  double truncated_alpha = 0.0;  // alpha truncated to 12 decimal digits
  double truncated_energy = 0.0;
};

/// Re-solves with target 8 - 2 epsilon, giving p > p* where the family beats
/// the repeated-ortho energy. Requires epsilon in (0, 0.5].
SubthresholdWitness subthreshold_witness(double epsilon);

/// Transition exponent for N points on the circle estimated by global
/// search (threshold_bisect with d = 2 over [1, 2]).
ThresholdEstimate circle_transition(int count, const MinimizeOptions& options,
                                    double tolerance = 1e-4);

}  // namespace framepot
