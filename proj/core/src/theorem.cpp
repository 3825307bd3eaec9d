#include "framepot/theorem.hpp"

#include "framepot/error.hpp"
#include "framepot/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace framepot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kScanPoints = 10000;
constexpr int kGridPoints = 1000;
constexpr double kCriticalTolerance = 1e-13;
constexpr double kInteriorOffset = 1e-9;  // fraction of |I| kept clear of each end

void require_indices(int m, int j, const char* where) {
  if (m < 1 || j < 1) {
    throw DomainError(std::string(where) + ": m and j must be positive");
  }
}

void require_in_closure(int j, double x, const char* where) {
  const double lo = 1.0 / (j + 1);
  const double hi = 1.0 / j;
  if (!(x >= lo * (1.0 - 1e-14) && x <= hi * (1.0 + 1e-14))) {
    std::ostringstream msg;
    msg << where << ": x = " << x << " outside [1/" << j + 1 << ", 1/" << j << "]";
    throw DomainError(msg.str());
  }
}

// 1 - jx, with rounding at x = fl(1/j) absorbed into 0.
double remainder_of(int j, double x) {
  const double u = 1.0 - j * x;
  if (u < 0.0 && u > -1e-14) return 0.0;
  return u;
}

struct Interval {
  double lo;
  double hi;
  double width() const { return hi - lo; }
  double inner_lo() const { return lo + kInteriorOffset * width(); }
  double inner_hi() const { return hi - kInteriorOffset * width(); }
  double grid(int i, int points) const {
    return inner_lo() + (inner_hi() - inner_lo()) * i / (points - 1);
  }
};

Interval interval_of(int j) { return {1.0 / (j + 1), 1.0 / j}; }

double aux_f_first(int m, int j, double x) {
  const double den = 1.0 + m * (j * x - 1.0);
  return -m * (1.0 + j - m) / (den * den);
}

double aux_g_first(int j, double x, double q) {
  const double gamma = aux_gamma(q);
  const double u = x / (1.0 - j * x);
  return gamma * std::pow(u, gamma) / (x * (1.0 - j * x));
}

std::vector<double> derivative_brackets(int m, int j, double q) {
  const Interval in = interval_of(j);
  std::vector<double> brackets;
  double prev_x = in.grid(0, kScanPoints);
  double prev = g_derivative(m, j, prev_x, q);
  for (int i = 1; i < kScanPoints; ++i) {
    const double x = in.grid(i, kScanPoints);
    const double d = g_derivative(m, j, x, q);
    if (d == 0.0) continue;
    if (prev != 0.0 && std::signbit(d) != std::signbit(prev)) brackets.push_back(prev_x);
    prev = d;
    prev_x = x;
  }
  return brackets;
}

SequenceCheck check_sequence(int m, double q, bool left) {
  SequenceCheck seq;
  for (int j = m + 1; j <= 8 * m; ++j) {
    const EndpointValues ev = endpoint_values(m, j, q);
    seq.j_values.push_back(j);
    seq.values.push_back(left ? ev.left : ev.right);
  }
  const auto it = std::min_element(seq.values.begin(), seq.values.end());
  seq.minimum = *it;
  const double slack = 1e-12 * std::max(1.0, std::abs(seq.minimum));
  for (std::size_t i = 0; i < seq.values.size(); ++i) {
    if (seq.values[i] <= seq.minimum + slack) seq.argmin.push_back(seq.j_values[i]);
  }
  const auto first = static_cast<std::size_t>(it - seq.values.begin());
  seq.unimodal = true;
  for (std::size_t i = 0; i + 1 < seq.values.size(); ++i) {
    const double a = seq.values[i];
    const double b = seq.values[i + 1];
    const double tol = 1e-12 * std::max(1.0, std::abs(a));
    if (i < first && b > a + tol) seq.unimodal = false;
    if (i >= first && b < a - tol) seq.unimodal = false;
  }
  return seq;
}

std::string where(int m, int j, double x) {
  std::ostringstream out;
  out.precision(17);
  out << "(m=" << m << ", j=" << j << ", x=" << x << ")";
  return out.str();
}

CriticalPointRecord check_interval(int m, int j, double q, VerificationReport& report) {
  const Interval in = interval_of(j);
  const double bound = 2.0 * m;
  CriticalPointRecord rec;
  rec.j = j;
  rec.interval_lo = in.lo;
  rec.interval_hi = in.hi;

  // Endpoint closed forms against the defining expression.
  const EndpointValues ev = endpoint_values(m, j, q);
  rec.endpoint_left_value = ev.left;
  rec.endpoint_right_value = ev.right;
  rec.left_formula_error = std::abs(g_value(m, j, in.lo, q) - ev.left);
  rec.right_formula_error = j > m ? std::abs(g_value(m, j, in.hi, q) - ev.right) : 0.0;
  rec.endpoints_ok = rec.left_formula_error <= kEndpointTolerance &&
                     rec.right_formula_error <= kEndpointTolerance;
  if (!rec.endpoints_ok) {
    report.failures.push_back("endpoint closed form mismatch " + where(m, j, in.lo));
  }

  // g_j' vanishes at the left end; diverges at the right end (to -inf for
  // j > m, to +inf at the cap singularity j = m).
  const double a = m * in.lo;
  const double term_scale = q * j * m * std::pow(a / (1.0 - a), q - 1.0) / ((1.0 - a) * (1.0 - a));
  rec.left_derivative = g_derivative(m, j, in.lo, q);
  bool derivative_ok = std::abs(rec.left_derivative) <= 1e-10 * std::max(1.0, term_scale);
  for (double scale : {1e-3, 1e-6, 1e-9, 1e-12}) {
    rec.right_derivative_trend.push_back(g_derivative(m, j, in.hi - scale * in.width(), q));
  }
  const auto& trend = rec.right_derivative_trend;
  for (std::size_t i = 1; i < trend.size(); ++i) {
    if (j > m) {
      derivative_ok = derivative_ok && trend[i] < trend[i - 1] && trend[i] < 0.0;
    } else {
      derivative_ok = derivative_ok && trend[i] > trend[i - 1] && trend[i] > 0.0;
    }
  }
  rec.derivative_ok = derivative_ok;
  if (!derivative_ok) report.failures.push_back("derivative endpoint condition " + where(m, j, in.hi));

  // Auxiliary pair: equal at the left end, f convex and g concave on I.
  const AuxPair left_pair = aux_pair(m, j, in.lo, q);
  rec.aux_left_f = left_pair.f;
  rec.aux_left_g = left_pair.g;
  rec.aux_slope_margin = aux_g_first(j, in.lo, q) - aux_f_first(m, j, in.lo);
  const bool aux_equal = std::abs(left_pair.f - 1.0) <= kEndpointTolerance &&
                         std::abs(left_pair.g - 1.0) <= kEndpointTolerance;

  std::vector<AuxPair> grid(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) grid[i] = aux_pair(m, j, in.grid(i, kGridPoints), q);
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = in.grid(i, kGridPoints);
    bool convex = aux_f_second(m, j, x) > 0.0;
    bool concave = aux_g_second(j, x, q) < 0.0;
    if (i > 0 && i + 1 < kGridPoints) {
      convex = convex && grid[i - 1].f - 2.0 * grid[i].f + grid[i + 1].f > 0.0;
      concave = concave && grid[i - 1].g - 2.0 * grid[i].g + grid[i + 1].g < 0.0;
    }
    if (!convex) ++rec.convexity_violations;
    if (!concave) {
      if (rec.concavity_violations == 0) rec.first_concavity_violation = x;
      ++rec.concavity_violations;
    }
  }
  rec.convexity_ok = aux_equal && rec.convexity_violations == 0;
  rec.concavity_ok = aux_equal && rec.concavity_violations == 0;
  if (!rec.convexity_ok) {
    report.failures.push_back("f_aux not convex on " + std::to_string(rec.convexity_violations) +
                              " grid points " + where(m, j, in.lo));
  }
  if (!rec.concavity_ok) {
    report.failures.push_back("g_aux not concave on " + std::to_string(rec.concavity_violations) +
                              " grid points " + where(m, j, rec.first_concavity_violation));
  }

  // Critical points: at most one, none at j = 4m, and a local maximum.
  rec.critical_ok = true;
  try {
    rec.sign_changes = static_cast<int>(derivative_brackets(m, j, q).size());
    rec.critical_x = find_critical_point(m, j, q);
  } catch (const StructureViolation& e) {
    rec.critical_ok = false;
    report.failures.push_back(std::string(e.what()) + " " + where(m, j, e.brackets().front()));
  }
  if (rec.critical_x) {
    rec.critical_value = g_value(m, j, *rec.critical_x, q);
    const bool local_max = rec.critical_value >= ev.left && rec.critical_value >= ev.right;
    if (j == 4 * m || !local_max) {
      rec.critical_ok = false;
      report.failures.push_back(
          std::string(j == 4 * m ? "critical point at j = 4m " : "critical point is not a maximum ") +
          where(m, j, *rec.critical_x));
    }
  }

  // Lower bound over I.
  rec.min_on_interval = ev.left;
  rec.min_location = in.lo;
  auto consider = [&](double x, double v) {
    if (v < rec.min_on_interval) {
      rec.min_on_interval = v;
      rec.min_location = x;
    }
  };
  if (j > m) consider(in.hi, ev.right);
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = in.grid(i, kGridPoints);
    consider(x, g_value(m, j, x, q));
  }
  if (rec.critical_x) consider(*rec.critical_x, rec.critical_value);
  rec.bound_ok = rec.min_on_interval >= bound - kTheoremTolerance;
  if (!rec.bound_ok) {
    report.dips_below_bound = true;
    report.failures.push_back("g_j below 2m " + where(m, j, rec.min_location));
  }
  return rec;
}

}  // namespace

TheoremParams p_threshold(int m) {
  if (m < 1) throw DomainError("p_threshold: m must be positive");
  TheoremParams params;
  params.m = m;
  params.p0 = 2.0 * std::log1p(1.0 / (2.0 * m)) / std::log1p(1.0 / m);
  params.q = params.p0 / 2.0;
  return params;
}

double g_value(int m, int j, double x, double q) {
  require_indices(m, j, "g_value");
  require_in_closure(j, x, "g_value");
  const double a = m * x;
  const double u = remainder_of(j, x);
  if (!(1.0 - a > 0.0) || u < 0.0) throw DomainError("g_value: " + where(m, j, x) + " off domain");
  const double b = m * u;
  if (!(1.0 - b > 0.0)) throw DomainError("g_value: " + where(m, j, x) + " off domain");
  const double tail = b == 0.0 ? 0.0 : std::pow(b / (1.0 - b), q);
  return j * std::pow(a / (1.0 - a), q) + tail;
}

double g_derivative(int m, int j, double x, double q) {
  require_indices(m, j, "g_derivative");
  require_in_closure(j, x, "g_derivative");
  const double a = m * x;
  const double u = remainder_of(j, x);
  if (!(1.0 - a > 0.0) || u < 0.0) {
    throw DomainError("g_derivative: " + where(m, j, x) + " off domain");
  }
  const double b = m * u;
  const double scale = q * j * m;
  const double head = scale * std::pow(a / (1.0 - a), q - 1.0) / ((1.0 - a) * (1.0 - a));
  if (b == 0.0) return -kInf;
  const double tail = scale * std::pow(b / (1.0 - b), q - 1.0) / ((1.0 - b) * (1.0 - b));
  return head - tail;
}

double aux_gamma(double q) { return 1.0 - 2.0 / (q + 1.0); }

AuxPair aux_pair(int m, int j, double x, double q) {
  require_indices(m, j, "aux_pair");
  require_in_closure(j, x, "aux_pair");
  const double den = 1.0 + m * (j * x - 1.0);
  if (!(den > 0.0)) throw DomainError("aux_pair: " + where(m, j, x) + " off domain");
  const double u = remainder_of(j, x);
  const double ratio = u == 0.0 ? kInf : x / u;
  return {(1.0 - m * x) / den, std::pow(ratio, aux_gamma(q))};
}

double aux_f_second(int m, int j, double x) {
  const double den = 1.0 + m * (j * x - 1.0);
  return 2.0 * j * (1.0 + j - m) * m * m / (den * den * den);
}

double aux_g_second(int j, double x, double q) {
  const double gamma = aux_gamma(q);
  const double jx = j * x;
  return gamma * std::pow(x / (1.0 - jx), gamma) * (gamma - 1.0 + 2.0 * jx) /
         (x * x * (jx - 1.0) * (jx - 1.0));
}

StructureViolation::StructureViolation(int m, int j, std::vector<double> brackets)
    : std::runtime_error("g_j' has " + std::to_string(brackets.size()) +
                         " sign changes on I (expected at most one)"),
      m_(m),
      j_(j),
      brackets_(std::move(brackets)) {}

std::optional<double> find_critical_point(int m, int j, double q) {
  require_indices(m, j, "find_critical_point");
  if (j < m || j > 4 * m) throw DomainError("find_critical_point: j must lie in [m, 4m]");
  auto brackets = derivative_brackets(m, j, q);
  if (brackets.empty()) return std::nullopt;
  if (brackets.size() > 1) throw StructureViolation(m, j, std::move(brackets));

  const Interval in = interval_of(j);
  const double step = (in.inner_hi() - in.inner_lo()) / (kScanPoints - 1);
  double lo = brackets.front();
  double hi = std::min(lo + step, in.inner_hi());
  const bool lo_positive = g_derivative(m, j, lo, q) > 0.0;
  while (hi - lo > kCriticalTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((g_derivative(m, j, mid, q) > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EndpointValues endpoint_values(int m, int j, double q) {
  require_indices(m, j, "endpoint_values");
  if (j < m) throw DomainError("endpoint_values: j must be >= m");
  EndpointValues ev;
  ev.left = (1.0 + j) * std::pow(static_cast<double>(m) / (1.0 + j - m), q);
  ev.right = j > m ? j * std::pow(static_cast<double>(m) / (j - m), q) : kInf;
  return ev;
}

VerificationReport verify_theorem(int m, std::optional<double> p_override) {
  if (m < 1) throw DomainError("verify_theorem: m must be positive");
  const TheoremParams params = p_threshold(m);
  VerificationReport report;
  report.m = m;
  report.p = params.p0;
  if (p_override) {
    if (!(*p_override >= 1.0 && *p_override < 2.0)) {
      throw PreconditionError("verify_theorem: p override must lie in [1, 2)");
    }
    report.p = *p_override;
    report.exploratory = true;
  }
  report.q = report.p / 2.0;
  const double bound = 2.0 * m;

  for (int j = m; j <= 4 * m; ++j) {
    report.records.push_back(check_interval(m, j, report.q, report));
  }

  // Uniform candidates k f(1/k) with c = 1/m, at p and 10 smaller exponents.
  report.uniform_case_min = kInf;
  for (int i = 0; i <= 10; ++i) {
    const double p = report.p - (report.p - 1.0) * i / 10.0;
    report.uniform_case_p_values.push_back(p);
    const double threshold = (0.5 - p / 4.0) / m;
    const int k_max = static_cast<int>(std::floor(1.0 / threshold + 1e-9));
    const RelaxationProblem problem(1.0 / m, p, std::max(k_max, m + 1));
    for (int k = m + 1; k <= k_max; ++k) {
      report.uniform_case_min = std::min(report.uniform_case_min, case_i_value(problem, k));
    }
  }
  report.uniform_case_ok = report.uniform_case_min >= bound - kTheoremTolerance;
  if (!report.uniform_case_ok) {
    report.dips_below_bound = true;
    report.failures.push_back("uniform candidate below 2m (m=" + std::to_string(m) + ")");
  }

  // Integer minimization over j of both endpoint sequences.
  report.left_sequence = check_sequence(m, report.q, true);
  report.right_sequence = check_sequence(m, report.q, false);
  bool sequences_ok = report.left_sequence.unimodal && report.right_sequence.unimodal;
  if (!report.exploratory) {
    const double tol = kEndpointTolerance * std::max(1.0, bound);
    std::vector<int> left_expected;
    if (2 * m - 1 >= m + 1) left_expected.push_back(2 * m - 1);
    left_expected.push_back(2 * m);
    const std::vector<int> right_expected{2 * m, 2 * m + 1};
    sequences_ok = sequences_ok && std::abs(report.left_sequence.minimum - bound) <= tol &&
                   std::abs(report.right_sequence.minimum - bound) <= tol &&
                   report.left_sequence.argmin == left_expected &&
                   report.right_sequence.argmin == right_expected;
  }
  report.sequences_ok = sequences_ok;
  if (!sequences_ok) {
    report.failures.push_back("endpoint sequences in j are not minimized at 2m (m=" +
                              std::to_string(m) + ")");
  }

  report.pass = report.uniform_case_ok && report.sequences_ok &&
                std::all_of(report.records.begin(), report.records.end(),
                            [](const CriticalPointRecord& r) { return r.pass(); });
  return report;
}

}  // namespace framepot
