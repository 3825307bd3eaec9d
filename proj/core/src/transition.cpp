#include "framepot/transition.hpp"

#include "framepot/error.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace framepot {
namespace {

constexpr double kAlphaMax = 0.70710678118654752440;  // 1/sqrt(2)
constexpr double kAlphaMargin = 1e-6;
constexpr int kAlphaScanPoints = 2000;
constexpr double kAlphaTolerance = 1e-15;

double branch_beta(double alpha) {
  const double beta = 1.0 - 2.0 * alpha * alpha;
  return (beta < 0.0 && beta > -1e-15) ? 0.0 : beta;
}

void require_alpha(double alpha, const char* where) {
  if (!(alpha >= 0.0 && alpha <= kAlphaMax + 1e-15)) {
    std::ostringstream msg;
    msg << where << ": alpha = " << alpha << " outside [0, 1/sqrt(2)]";
    throw DomainError(msg.str());
  }
}

double energy_dp(double alpha, double p) {
  const double beta = branch_beta(alpha);
  const double s2 = 1.0 - alpha * alpha;
  double v = 2.0 * std::pow(s2, 0.5 * p) * std::log(s2);
  if (alpha > 0.0) v += 8.0 * std::pow(alpha, p) * std::log(alpha);
  if (beta > 0.0) v += 2.0 * std::pow(beta, p) * std::log(beta);
  return v;
}

// The family beats `target` at p when its interior local minimum lies below it.
std::optional<double> below_target(double p, double target) {
  const auto alpha = stationary_alpha(p);
  if (alpha && five_point_energy(*alpha, p) < target) return alpha;
  return std::nullopt;
}

// Newton step on (E - target, dE/da); kept only if the residual shrinks.
void polish(TransitionSolution& sol) {
  auto residual = [&](double a, double p) {
    return std::array<double, 2>{five_point_energy(a, p) - sol.target,
                                 five_point_energy_dalpha(a, p)};
  };
  auto norm = [](const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); };
  for (int iter = 0; iter < 3; ++iter) {
    const auto r = residual(sol.alpha, sol.p);
    const double h = 1e-7;
    const double d_aa = (five_point_energy_dalpha(sol.alpha + h, sol.p) -
                         five_point_energy_dalpha(sol.alpha - h, sol.p)) / (2.0 * h);
    const double d_ap = (five_point_energy_dalpha(sol.alpha, sol.p + h) -
                         five_point_energy_dalpha(sol.alpha, sol.p - h)) / (2.0 * h);
    const double e_a = r[1];
    const double e_p = energy_dp(sol.alpha, sol.p);
    const double det = e_a * d_ap - e_p * d_aa;
    if (det == 0.0 || !std::isfinite(det)) return;
    const double da = (r[0] * d_ap - e_p * r[1]) / det;
    const double dp = (e_a * r[1] - d_aa * r[0]) / det;
    const double a_new = sol.alpha - da;
    const double p_new = sol.p - dp;
    if (!(a_new > 0.0 && a_new < kAlphaMax && p_new > 1.0)) return;
    if (norm(residual(a_new, p_new)) >= norm(r)) return;
    sol.alpha = a_new;
    sol.p = p_new;
  }
}

}  // namespace

GramMatrix five_point_gram(double alpha, double beta) {
  if (!(std::abs(alpha) <= 1.0)) throw DomainError("five_point_gram: |alpha| must be <= 1");
  const double s = std::sqrt(1.0 - alpha * alpha);
  Eigen::MatrixXd a(5, 5);
  // clang-format off
  a <<  1.0,    1.0,   0.0, alpha, -alpha,
        1.0,    1.0,   0.0, alpha, -alpha,
        0.0,    0.0,   1.0, s,      s,
        alpha,  alpha, s,   1.0,    beta,
       -alpha, -alpha, s,   beta,   1.0;
  // clang-format on
  return GramMatrix::from_entries(std::move(a));
}

double five_point_minor_determinant(double alpha, double beta) {
  Eigen::Matrix3d minor;
  minor << 1.0, alpha, -alpha, alpha, 1.0, beta, -alpha, beta, 1.0;
  return minor.determinant();
}

BetaRoots beta_roots(double alpha) {
  if (!(std::abs(alpha) <= 1.0)) throw DomainError("beta_roots: |alpha| must be <= 1");
  BetaRoots roots;
  roots.other = 1.0 - 2.0 * alpha * alpha;
  roots.det_at_negative_one = five_point_minor_determinant(alpha, roots.negative_one);
  roots.det_at_other = five_point_minor_determinant(alpha, roots.other);
  return roots;
}

double five_point_energy(double alpha, double p) {
  require_alpha(alpha, "five_point_energy");
  if (!(p > 0.0)) throw DomainError("five_point_energy: p must be positive");
  const double beta = branch_beta(alpha);
  double e = 2.0 + 4.0 * std::pow(1.0 - alpha * alpha, 0.5 * p);
  if (alpha > 0.0) e += 8.0 * std::pow(alpha, p);
  if (beta > 0.0) e += 2.0 * std::pow(beta, p);
  return e;
}

double five_point_energy_dalpha(double alpha, double p) {
  require_alpha(alpha, "five_point_energy_dalpha");
  if (!(p >= 1.0)) throw DomainError("five_point_energy_dalpha: p must be at least 1");
  if (alpha == 0.0) return 0.0;
  const double beta = branch_beta(alpha);
  const double middle = beta > 0.0 ? 8.0 * alpha * std::pow(beta, p - 1.0) : 0.0;
  return p * (8.0 * std::pow(alpha, p - 1.0) - middle -
              4.0 * alpha * std::pow(1.0 - alpha * alpha, 0.5 * p - 1.0));
}

std::optional<double> stationary_alpha(double p) {
  const double lo = kAlphaMargin;
  const double hi = kAlphaMax - kAlphaMargin;
  std::optional<double> best;
  double best_energy = 0.0;
  double prev_a = lo;
  double prev_d = five_point_energy_dalpha(lo, p);
  for (int i = 1; i < kAlphaScanPoints; ++i) {
    const double a = lo + (hi - lo) * i / (kAlphaScanPoints - 1);
    const double d = five_point_energy_dalpha(a, p);
    if (prev_d < 0.0 && d >= 0.0) {
      double left = prev_a;
      double right = a;
      while (right - left > kAlphaTolerance) {
        const double mid = 0.5 * (left + right);
        if (mid <= left || mid >= right) break;
        if (five_point_energy_dalpha(mid, p) < 0.0) {
          left = mid;
        } else {
          right = mid;
        }
      }
      const double root = 0.5 * (left + right);
      const double e = five_point_energy(root, p);
      if (!best || e < best_energy) {
        best = root;
        best_energy = e;
      }
    }
    prev_a = a;
    prev_d = d;
  }
  return best;
}

TransitionSolution solve_transition(double target) {
  double p_lo = 1.0;
  double p_hi = 2.0;
  if (below_target(p_lo, target) || !below_target(p_hi, target)) {
    std::ostringstream msg;
    msg << "transition: p in [" << p_lo << ", " << p_hi << "] does not bracket the crossing of "
        << target;
    throw SolverError(msg.str());
  }
  TransitionSolution sol;
  sol.target = target;
  while (p_hi - p_lo > 0.0) {
    const double mid = 0.5 * (p_lo + p_hi);
    if (mid <= p_lo || mid >= p_hi) break;
    ++sol.outer_iterations;
    if (below_target(mid, target)) {
      p_hi = mid;
    } else {
      p_lo = mid;
    }
  }
  sol.p = p_hi;
  sol.alpha = *stationary_alpha(p_hi);
  polish(sol);
  sol.energy_residual = five_point_energy(sol.alpha, sol.p) - target;
  sol.stationarity_residual = five_point_energy_dalpha(sol.alpha, sol.p);
  return sol;
}

SubthresholdWitness subthreshold_witness(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw PreconditionError("subthreshold_witness: epsilon must lie in (0, 0.5]");
  }
  const TransitionSolution sol = solve_transition(kFivePointOrthoEnergy - 2.0 * epsilon);
  SubthresholdWitness w;
  w.epsilon = epsilon;
  w.alpha = sol.alpha;
  w.p = sol.p;
  w.energy = five_point_energy(sol.alpha, sol.p);
  w.truncated_alpha = std::trunc(sol.alpha * 1e12) / 1e12;
  w.truncated_energy = five_point_energy(w.truncated_alpha, sol.p);
  return w;
}

ThresholdEstimate circle_transition(int count, const MinimizeOptions& options, double tolerance) {
  if (count < 3) throw PreconditionError("circle_transition needs N >= 3");
  return threshold_bisect(2, count, 1.0, 2.0, tolerance, options);
}

}  // namespace framepot
