#pragma once

// Desk-scale verification of the lower bound E_p(A) >= 2m for rank-d
// (d+m) x (d+m) unit-diagonal A and 1 <= p <= p0(m), where
//
//   p0(m) = 2 log((2m+1)/(2m)) / log((m+1)/m),   q = p0 / 2.
//
// The argument reduces to the functions
//
//   g_j(x) = j (mx/(1-mx))^q + (m(1-jx)/(1-m(1-jx)))^q
//
// on I_j = (1/(j+1), 1/j) for m <= j <= 4m. Each proof step is checked
// numerically and reported; nothing here is a symbolic proof.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace framepot {

struct TheoremParams {
  int m = 1;
  double p0 = 0.0;
  double q = 0.0;
};

TheoremParams p_threshold(int m);

/// g_j(x) on the closure of I_j. Throws DomainError outside it or where
/// 1 - mx <= 0 (the right end of I_m).
double g_value(int m, int j, double x, double q);

/// Closed-form g_j'(x). -infinity at x = 1/j for j > m.
double g_derivative(int m, int j, double x, double q);

/// The pair compared at critical points of g_j:
///   f_aux(x) = (1 - mx) / (1 + m(jx - 1)),   g_aux(x) = (x / (1 - jx))^gamma,
/// gamma = 1 - 2/(q+1) < 0. Both equal 1 at x = 1/(j+1).
struct AuxPair {
  double f = 0.0;
  double g = 0.0;
};
AuxPair aux_pair(int m, int j, double x, double q);

double aux_gamma(double q);
/// Closed-form second derivatives of the auxiliary pair.
double aux_f_second(int m, int j, double x);
double aux_g_second(int j, double x, double q);

/// Thrown when g_j' has more than one sign change inside I_j.
class StructureViolation : public std::runtime_error {
 public:
  StructureViolation(int m, int j, std::vector<double> brackets);
  int m() const noexcept { return m_; }
  int j() const noexcept { return j_; }
  const std::vector<double>& brackets() const noexcept { return brackets_; }

 private:
  int m_;
  int j_;
  std::vector<double> brackets_;
};

/// Interior zero of g_j' located by a 10,000-point sign scan and bisection
/// to 1e-13. nullopt when g_j' keeps one sign.
std::optional<double> find_critical_point(int m, int j, double q);

struct EndpointValues {
  double left = 0.0;   // (1+j) (m/(1+j-m))^q
  double right = 0.0;  // j (m/(j-m))^q; +infinity for j = m
};
EndpointValues endpoint_values(int m, int j, double q);

struct CriticalPointRecord {
  int j = 0;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  std::optional<double> critical_x;
  double critical_value = 0.0;  // g_j at critical_x when present
  int sign_changes = 0;
  double endpoint_left_value = 0.0;
  double endpoint_right_value = 0.0;
  double min_on_interval = 0.0;
  double min_location = 0.0;

  double left_formula_error = 0.0;   // |g_j(1/(j+1)) - closed form|
  double right_formula_error = 0.0;  // |g_j(1/j) - closed form|, 0 for j = m
  double left_derivative = 0.0;      // g_j'(1/(j+1)), should vanish
  std::vector<double> right_derivative_trend;  // g_j' at 1/j - delta, delta shrinking
  double aux_left_f = 0.0;
  double aux_left_g = 0.0;
  double aux_slope_margin = 0.0;     // g_aux'(left) - f_aux'(left)
  int convexity_violations = 0;      // grid points where f_aux'' <= 0
  int concavity_violations = 0;      // grid points where g_aux'' >= 0
  double first_concavity_violation = 0.0;

  bool endpoints_ok = false;
  bool derivative_ok = false;
  bool convexity_ok = false;
  bool concavity_ok = false;
  bool critical_ok = false;
  bool bound_ok = false;
  bool pass() const noexcept {
    return endpoints_ok && derivative_ok && convexity_ok && concavity_ok && critical_ok &&
           bound_ok;
  }
};

struct SequenceCheck {
  std::vector<int> j_values;
  std::vector<double> values;
  double minimum = 0.0;
  std::vector<int> argmin;  // all j attaining the minimum within tolerance
  bool unimodal = false;
};

struct VerificationReport {
  int m = 1;
  double p = 0.0;  // exponent under test (p0 unless overridden)
  double q = 0.0;
  bool exploratory = false;  // p overridden beyond the proven range
  std::vector<CriticalPointRecord> records;

  std::vector<double> uniform_case_p_values;
  double uniform_case_min = 0.0;  // min over p and feasible k of k f(1/k), c = 1/m
  bool uniform_case_ok = false;

  SequenceCheck left_sequence;   // (1+j) (m/(1+j-m))^q over j
  SequenceCheck right_sequence;  // j (m/(j-m))^q over j
  bool sequences_ok = false;

  bool dips_below_bound = false;  // any grid value of g_j below 2m - 1e-9
  std::vector<std::string> failures;
  bool pass = false;
};

inline constexpr double kTheoremTolerance = 1e-9;
inline constexpr double kEndpointTolerance = 1e-12;

/// Runs every check for the given m. `p_override` replaces p0(m) by another
/// exponent (exploratory; the report then records dips instead of asserting).
VerificationReport verify_theorem(int m, std::optional<double> p_override = std::nullopt);

}  // namespace framepot
