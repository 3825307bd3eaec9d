#include "framepot/relaxation.hpp"

#include "framepot/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace framepot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGoldenTolerance = 1e-12;
constexpr int kSafetyGridPoints = 1000;

}  // namespace

RelaxationProblem::RelaxationProblem(double cap, double p, int count)
    : cap_(cap), p_(p), count_(count) {
  if (count < 1) throw PreconditionError("relaxation needs N >= 1");
  if (!(p >= 1.0 && p <= 2.0)) {
    throw PreconditionError("relaxation exponent must lie in [1, 2], got " + std::to_string(p));
  }
  if (!std::isfinite(cap) || !(cap * count > 1.0)) {
    throw PreconditionError("relaxation cap must exceed 1/N (c = " + std::to_string(cap) +
                            ", N = " + std::to_string(count) + ")");
  }
}

double f_relax(double cap, double p, double t) {
  if (t < 0.0) throw DomainError("f_relax: negative argument " + std::to_string(t));
  if (t >= cap) return kInf;
  if (t == 0.0) return 0.0;
  return std::pow(t / (cap - t), 0.5 * p);
}

double case_i_value(const RelaxationProblem& problem, int k) {
  if (k < 1) throw DomainError("case_i_value: k must be positive");
  return k * f_relax(problem.cap(), problem.p(), 1.0 / k);
}

double case_ii_value(const RelaxationProblem& problem, int k, double x) {
  if (k < 1) throw DomainError("case_ii_value: k must be positive");
  double rest = 1.0 - k * x;
  if (x < 0.0 || rest < -1e-12) {
    throw DomainError("case_ii_value: (x, 1 - kx) = (" + std::to_string(x) + ", " +
                      std::to_string(rest) + ") is off the simplex");
  }
  rest = std::max(rest, 0.0);
  return k * f_relax(problem.cap(), problem.p(), x) + f_relax(problem.cap(), problem.p(), rest);
}

namespace {

// Split-case x-range from the threshold constraints alone (no cap).
std::optional<SplitInterval> uncapped_split_interval(double threshold, int k) {
  if (threshold <= 0.0) return std::nullopt;
  const double lo = std::max({threshold, (1.0 - threshold) / k, 0.0});
  const double hi = 1.0 / k;
  if (lo > hi) return std::nullopt;
  return SplitInterval{lo, hi};
}

}  // namespace

std::optional<SplitInterval> split_interval(const RelaxationProblem& problem, int k) {
  auto range = uncapped_split_interval(problem.threshold(), k);
  if (!range) return std::nullopt;
  const double c = problem.cap();
  range->lo = std::max(range->lo, (1.0 - c) / k);
  range->hi = std::min(range->hi, c);
  if (range->lo > range->hi) return std::nullopt;
  return range;
}

std::optional<LineMinimum> minimize_case_ii(const RelaxationProblem& problem, int k) {
  const auto range = split_interval(problem, k);
  if (!range) return std::nullopt;
  auto value = [&](double x) { return case_ii_value(problem, k, x); };

  LineMinimum best{range->lo, value(range->lo)};
  auto consider = [&](double x) {
    const double v = value(x);
    if (v < best.value) best = {x, v};
  };
  consider(range->hi);
  if (range->hi - range->lo <= 0.0) return best;

  for (int i = 1; i < kSafetyGridPoints - 1; ++i) {
    consider(range->lo + (range->hi - range->lo) * i / (kSafetyGridPoints - 1));
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = range->lo;
  double b = range->hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = value(c);
  double fd = value(d);
  while (b - a > kGoldenTolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = value(d);
    }
  }
  consider(0.5 * (a + b));
  return best;
}

RelaxationOptimum relaxation_minimum(const RelaxationProblem& problem) {
  const double threshold = problem.threshold();
  const double cap = problem.cap();
  RelaxationOptimum result;
  result.value = kInf;

  for (int k = 1; k <= problem.count(); ++k) {
    const double t = 1.0 / k;
    if (threshold > 0.0 && t < threshold) continue;
    if (t >= cap) {
      ++result.rejected_by_cap;
      continue;
    }
    const double v = case_i_value(problem, k);
    if (v < result.value) {
      result.value = v;
      result.argmin = {CandidateCase::kUniform, k, t, v};
    }
  }
  for (int k = 1; k < problem.count(); ++k) {
    if (!uncapped_split_interval(threshold, k)) continue;
    const auto line = minimize_case_ii(problem, k);
    if (!line || !std::isfinite(line->value)) {
      ++result.rejected_by_cap;
      continue;
    }
    if (line->value < result.value) {
      result.value = line->value;
      result.argmin = {CandidateCase::kSplit, k, line->x, line->value};
    }
  }
  if (!std::isfinite(result.value)) {
    throw SolverError("no feasible relaxation candidate for c = " + std::to_string(cap) +
                      ", p = " + std::to_string(problem.p()) +
                      ", N = " + std::to_string(problem.count()));
  }
  return result;
}

namespace {

// Minimum over compositions of `remaining` grid units into `parts` parts.
double scan_compositions(const std::vector<double>& table, int parts, int remaining) {
  if (parts == 1) return table[static_cast<std::size_t>(remaining)];
  double best = kInf;
  for (int i = 0; i <= remaining; ++i) {
    const double head = table[static_cast<std::size_t>(i)];
    if (!std::isfinite(head)) break;  // table is increasing in i
    best = std::min(best, head + scan_compositions(table, parts - 1, remaining - i));
  }
  return best;
}

}  // namespace

double relaxation_bruteforce(const RelaxationProblem& problem, int grid_steps) {
  if (problem.count() > kBruteForceMaxCount) {
    throw PreconditionError("relaxation_bruteforce refuses N > " +
                            std::to_string(kBruteForceMaxCount));
  }
  if (grid_steps < 1) throw PreconditionError("grid_steps must be positive");
  std::vector<double> table(static_cast<std::size_t>(grid_steps) + 1);
  for (int i = 0; i <= grid_steps; ++i) {
    table[static_cast<std::size_t>(i)] =
        f_relax(problem.cap(), problem.p(), static_cast<double>(i) / grid_steps);
  }
  const double best = scan_compositions(table, problem.count(), grid_steps);
  if (!std::isfinite(best)) {
    throw SolverError("no grid point of the simplex satisfies the cap");
  }
  return best;
}

BoundReport check_bound(const GramMatrix& gram, int dimension, double p) {
  const int n = gram.order();
  if (n <= dimension) {
    throw PreconditionError("bound needs N > d (N = " + std::to_string(n) +
                            ", d = " + std::to_string(dimension) + ")");
  }
  if (!(p >= 1.0 && p <= 2.0)) {
    throw PreconditionError("bound needs p in [1, 2], got " + std::to_string(p));
  }
  const RankReport rank = validate_rank(gram, dimension);
  if (!rank.within_bound) {
    throw PreconditionError("Gram matrix has numerical rank " + std::to_string(rank.rank) +
                            " > d = " + std::to_string(dimension));
  }
  BoundReport report;
  report.rank = rank.rank;
  report.energy = frame_energy(gram, Exponent(p));
  report.relaxation =
      relaxation_minimum(RelaxationProblem(1.0 / (n - dimension), p, n)).value;
  report.slack = report.energy - report.relaxation;
  report.pass = report.slack >= -kBoundTolerance;
  return report;
}

}  // namespace framepot
