#include "framepot/minimizer.hpp"

#include "framepot/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <thread>

namespace framepot {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Sum over ordered pairs of (t^2 + s^2)^{p/2}, from the Gram matrix.
double smoothed_from_gram(const Eigen::MatrixXd& gram, double p, double s) {
  const Eigen::Index n = gram.rows();
  const double s2 = s * s;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double t = gram(i, j);
      if (s2 == 0.0) {
        if (t != 0.0) sum += std::pow(std::abs(t), p);
      } else {
        sum += std::pow(t * t + s2, 0.5 * p);
      }
    }
  }
  return 2.0 * sum;
}

Eigen::MatrixXd gradient_from_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gram,
                                   double p, double s) {
  const Eigen::Index n = gram.rows();
  const double s2 = s * s;
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double t = gram(i, j);
      double w = 0.0;
      if (s2 == 0.0) {
        if (t != 0.0) w = std::copysign(std::pow(std::abs(t), p - 1.0), t);
      } else {
        w = t * std::pow(t * t + s2, 0.5 * p - 1.0);
      }
      weights(i, j) = weights(j, i) = 2.0 * p * w;
    }
  }
  Eigen::MatrixXd g = x * weights;
  // Tangent projection: remove the component along x_i.
  for (Eigen::Index i = 0; i < n; ++i) g.col(i) -= g.col(i).dot(x.col(i)) * x.col(i);
  return g;
}

void normalize_columns(Eigen::MatrixXd& x) {
  for (Eigen::Index i = 0; i < x.cols(); ++i) x.col(i) /= x.col(i).norm();
}

struct RestartResult {
  Eigen::MatrixXd x;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

RestartResult descend(int dimension, int count, double p, const MinimizeOptions& opt,
                      std::uint64_t restart) {
  Eigen::MatrixXd x = random_configuration(dimension, count, opt.seed, restart).vectors();
  const int schedule = std::max(1, (opt.max_iterations * 3) / 4);
  const double ratio = opt.smoothing_end / opt.smoothing_start;
  const double initial_step = 1.0 / count;

  RestartResult result;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const bool settled = it >= schedule - 1;
    const double s = settled ? opt.smoothing_end
                             : opt.smoothing_start *
                                   std::pow(ratio, static_cast<double>(it) / (schedule - 1));
    const Eigen::MatrixXd gram = x.transpose() * x;
    const double e = smoothed_from_gram(gram, p, s);
    const Eigen::MatrixXd g = gradient_from_gram(x, gram, p, s);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) {
      if (settled) {
        result.converged = true;
        break;
      }
      continue;
    }
    double step = initial_step;
    bool accepted = false;
    Eigen::MatrixXd y;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      y = x - step * g;
      normalize_columns(y);
      const double ey = smoothed_from_gram(y.transpose() * y, p, s);
      if (ey <= e - kArmijo * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (settled) {
        result.converged = true;
        break;
      }
      continue;
    }
    const double displacement = (y - x).cwiseAbs().maxCoeff();
    x = std::move(y);
    if (settled && displacement < opt.step_tolerance) {
      result.converged = true;
      ++it;
      break;
    }
  }
  normalize_columns(x);
  result.iterations = std::min(it + 1, opt.max_iterations);
  result.x = std::move(x);
  result.energy = frame_energy(gram_of(Configuration::from_columns(result.x)), Exponent(p));
  return result;
}

template <typename Fn>
void run_parallel(int tasks, int threads, Fn&& fn) {
  const int workers = std::max(1, std::min(threads, tasks));
  if (workers == 1) {
    for (int i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < tasks; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void MinimizeOptions::validate() const {
  if (restarts < 1) throw PreconditionError("restarts must be positive");
  if (max_iterations < 2) throw PreconditionError("max_iterations must be at least 2");
  if (!(step_tolerance > 0.0)) throw PreconditionError("step_tolerance must be positive");
  if (!(smoothing_end > 0.0) || !(smoothing_start >= smoothing_end)) {
    throw PreconditionError("smoothing must satisfy 0 < smoothing_end <= smoothing_start");
  }
  if (threads < 0) throw PreconditionError("threads must be non-negative");
}

double smoothed_energy(const Configuration& config, double p, double smoothing) {
  const Eigen::MatrixXd gram = config.vectors().transpose() * config.vectors();
  return smoothed_from_gram(gram, p, smoothing);
}

Eigen::MatrixXd energy_gradient(const Configuration& config, double p, double smoothing) {
  if (!(p >= 1.0)) throw DomainError("energy_gradient requires p >= 1");
  if (!(smoothing >= 0.0)) throw DomainError("energy_gradient requires smoothing >= 0");
  const Eigen::MatrixXd& x = config.vectors();
  return gradient_from_gram(x, x.transpose() * x, p, smoothing);
}

Configuration random_configuration(int dimension, int count, std::uint64_t seed,
                                   std::uint64_t restart) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(restart)));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(dimension, count);
  for (int i = 0; i < count; ++i) {
    do {
      for (int r = 0; r < dimension; ++r) x(r, i) = normal(rng);
    } while (x.col(i).norm() == 0.0);
  }
  return Configuration::normalized(std::move(x));
}

MinimizationReport minimize_energy(int dimension, int count, double p,
                                   const MinimizeOptions& options) {
  options.validate();
  if (dimension < 1 || count < 1) throw PreconditionError("minimize_energy needs d, N >= 1");
  if (!(p >= 1.0)) throw PreconditionError("minimize_energy needs p >= 1");

  std::vector<RestartResult> results(static_cast<std::size_t>(options.restarts));
  const int threads = options.threads > 0
                          ? options.threads
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  run_parallel(options.restarts, threads, [&](int r) {
    results[static_cast<std::size_t>(r)] =
        descend(dimension, count, p, options, static_cast<std::uint64_t>(r));
  });

  int best = 0;
  for (int r = 1; r < options.restarts; ++r) {
    if (results[static_cast<std::size_t>(r)].energy < results[static_cast<std::size_t>(best)].energy) {
      best = r;
    }
  }
  MinimizationReport report{Configuration::from_columns(results[static_cast<std::size_t>(best)].x),
                            results[static_cast<std::size_t>(best)].energy,
                            best,
                            {},
                            {},
                            {}};
  for (const auto& r : results) {
    report.per_restart_energies.push_back(r.energy);
    report.iterations_used.push_back(r.iterations);
    report.converged.push_back(r.converged);
  }
  return report;
}

double ortho_reference_energy(int dimension, int count) {
  const auto c = repeated_ortho_multiplicities(dimension, count);
  return multiplicity_energy(c);
}

ThresholdEstimate threshold_bisect(int dimension, int count, double p_lo, double p_hi,
                                   double tolerance, const MinimizeOptions& options) {
  if (!(p_lo >= 1.0 && p_lo < p_hi)) throw PreconditionError("threshold_bisect needs 1 <= p_lo < p_hi");
  if (!(tolerance > 0.0)) throw PreconditionError("threshold_bisect needs tolerance > 0");
  ThresholdEstimate est;
  est.ortho_value = ortho_reference_energy(dimension, count);
  auto best_at = [&](double p) { return minimize_energy(dimension, count, p, options).best_energy; };
  auto beaten = [&](double energy) { return energy < est.ortho_value - kDecisionMargin; };

  est.p_lo = p_lo;
  est.p_hi = p_hi;
  est.best_energy_at_p_lo = best_at(p_lo);
  est.best_energy_at_p_hi = best_at(p_hi);
  if (beaten(est.best_energy_at_p_lo)) {
    est.status = ThresholdStatus::kBeatenAtLow;
  } else if (!beaten(est.best_energy_at_p_hi)) {
    est.status = ThresholdStatus::kNoCrossing;
  } else {
    est.status = ThresholdStatus::kFound;
    while (est.p_hi - est.p_lo > tolerance) {
      const double mid = 0.5 * (est.p_lo + est.p_hi);
      const double e = best_at(mid);
      ++est.bisection_steps;
      if (beaten(e)) {
        est.p_hi = mid;
        est.best_energy_at_p_hi = e;
      } else {
        est.p_lo = mid;
        est.best_energy_at_p_lo = e;
      }
    }
  }
  est.p_estimate = 0.5 * (est.p_lo + est.p_hi);
  return est;
}

std::string to_string(ThresholdStatus status) {
  switch (status) {
    case ThresholdStatus::kFound:
      return "found";
    case ThresholdStatus::kNoCrossing:
      return "no_crossing";
    case ThresholdStatus::kBeatenAtLow:
      return "beaten_at_p_lo";
  }
  return "unknown";
}

ScanTable conjecture_scan(const std::vector<int>& d_list, const std::vector<int>& k_list,
                          const std::vector<int>& m_list, double tolerance,
                          const MinimizeOptions& options, double p_lo, double p_hi) {
  ScanTable table;
  table.p_lo = p_lo;
  table.p_hi = p_hi;
  table.tolerance = tolerance;
  table.options = options;
  for (int d : d_list) {
    for (int k : k_list) {
      for (int m : m_list) {
        ScanCell cell;
        cell.d = d;
        cell.k = k;
        cell.m = m;
        cell.count = m + k * d;
        if (d < 2 || k < 1 || m < 1 || m >= d) {
          cell.error = "requires d >= 2, k >= 1 and 1 <= m < d";
        } else if (cell.count > kScanMaxCount) {
          cell.error = "N = " + std::to_string(cell.count) + " exceeds " +
                       std::to_string(kScanMaxCount);
        } else {
          cell.ortho_value = ortho_reference_energy(d, cell.count);
          cell.formula_value = static_cast<double>(d) * (k * k - k) + 2.0 * k;
          try {
            cell.estimate = threshold_bisect(d, cell.count, p_lo, p_hi, tolerance, options);
          } catch (const std::exception& e) {
            cell.error = e.what();
          }
        }
        table.cells.push_back(std::move(cell));
      }
    }
  }

  std::map<int, std::vector<double>> by_k;
  for (const auto& cell : table.cells) {
    if (cell.estimate && cell.estimate->status == ThresholdStatus::kFound) {
      by_k[cell.k].push_back(cell.estimate->p_estimate);
    }
  }
  std::vector<double> means;
  for (const auto& [k, values] : by_k) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    table.agreement_by_k.emplace_back(k, *hi - *lo <= 2.0 * tolerance);
    double mean = 0.0;
    for (double v : values) mean += v;
    means.push_back(mean / static_cast<double>(values.size()));
  }
  table.increasing_in_k =
      means.size() >= 2 &&
      std::adjacent_find(means.begin(), means.end(),
                         [](double a, double b) { return b <= a; }) == means.end();
  return table;
}

}  // namespace framepot
