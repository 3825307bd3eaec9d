#include "framepot/frame.hpp"

#include "framepot/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace framepot {

Exponent::Exponent(double p) : p_(p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("energy exponent must be a finite p > 0, got " + std::to_string(p));
  }
}

Configuration Configuration::from_columns(Eigen::MatrixXd vectors, double tolerance) {
  if (vectors.rows() < 1 || vectors.cols() < 1) {
    throw ValidationError("configuration needs d >= 1 and N >= 1");
  }
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
    const double norm = vectors.col(i).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > tolerance) {
      throw ValidationError("vector " + std::to_string(i) + " has norm " +
                            std::to_string(norm) + ", expected 1");
    }
  }
  return Configuration(std::move(vectors));
}

Configuration Configuration::normalized(Eigen::MatrixXd vectors) {
  if (vectors.rows() < 1 || vectors.cols() < 1) {
    throw ValidationError("configuration needs d >= 1 and N >= 1");
  }
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
    const double norm = vectors.col(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ValidationError("vector " + std::to_string(i) + " cannot be normalized");
    }
    vectors.col(i) /= norm;
  }
  return Configuration(std::move(vectors));
}

GramMatrix GramMatrix::from_entries(Eigen::MatrixXd entries, double tolerance) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw ValidationError("Gram matrix must be square and non-empty");
  }
  const Eigen::Index n = entries.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(entries(i, i) - 1.0) > tolerance) {
      throw ValidationError("Gram diagonal entry " + std::to_string(i) + " is not 1");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!std::isfinite(entries(i, j)) || std::abs(entries(i, j) - entries(j, i)) > tolerance) {
        throw ValidationError("Gram matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
    }
  }
  entries.diagonal().setOnes();
  return GramMatrix(std::move(entries));
}

double GramMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

GramMatrix gram_of(const Configuration& config) {
  Eigen::MatrixXd a = config.vectors().transpose() * config.vectors();
  // Symmetrize explicitly so the stored matrix is exactly symmetric.
  a = 0.5 * (a + a.transpose()).eval();
  return GramMatrix::from_entries(std::move(a), 1e-9);
}

double frame_energy(const GramMatrix& gram, Exponent p) {
  const auto& a = gram.entries();
  const Eigen::Index n = a.rows();
  const double exponent = p.value();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double t = std::abs(a(i, j));
      if (t != 0.0) sum += std::pow(t, exponent);
    }
  }
  return 2.0 * sum;
}

Configuration repeated_ortho_config(int dimension, int count) {
  if (dimension < 1 || count < 1) {
    throw DomainError("repeated_ortho_config needs d >= 1 and N >= 1");
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dimension, count);
  for (int j = 0; j < count; ++j) v(j % dimension, j) = 1.0;
  return Configuration::from_columns(std::move(v));
}

std::vector<int> repeated_ortho_multiplicities(int dimension, int count) {
  if (dimension < 1 || count < 1) {
    throw DomainError("repeated_ortho_multiplicities needs d >= 1 and N >= 1");
  }
  std::vector<int> c(static_cast<std::size_t>(dimension), count / dimension);
  for (int i = 0; i < count % dimension; ++i) ++c[static_cast<std::size_t>(i)];
  return c;
}

double multiplicity_energy(std::span<const int> multiplicities) {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0.0,
                         [](double acc, int c) {
                           return acc + static_cast<double>(c) * static_cast<double>(c - 1);
                         });
}

RankReport validate_rank(const GramMatrix& gram, int dimension, double tolerance) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram.entries());
  const Eigen::VectorXd& s = svd.singularValues();
  RankReport report;
  report.bound = dimension;
  report.singular_values.assign(s.data(), s.data() + s.size());
  const double cutoff = tolerance * (s.size() > 0 ? s(0) : 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++report.rank;
  }
  report.within_bound = report.rank <= dimension;
  return report;
}

}  // namespace framepot
