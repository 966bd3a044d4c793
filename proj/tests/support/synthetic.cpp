#include "synthetic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "oinfo/rng.hpp"

namespace oinfo::testing {

namespace {

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

CorrelationMatrix standardize(const Eigen::MatrixXd& c) { return CorrelationMatrix::from_covariance(c); }

}  // namespace

CorrelationMatrix random_correlation(std::size_t n, std::uint64_t seed, std::size_t extra) {
  Rng rng(seed);
  const Eigen::MatrixXd a = normal_matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n + extra), rng);
  return standardize(a * a.transpose());
}

CorrelationMatrix gsr_block_matrix(std::size_t blocks, std::size_t per_block, double within, double between,
                                   double perturbation, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(blocks * per_block);
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      r(i, j) = i == j ? 1.0 : (i / static_cast<Eigen::Index>(per_block) == j / static_cast<Eigen::Index>(per_block)
                                    ? within
                                    : between);
  Rng rng(seed);
  const Eigen::MatrixXd l = normal_matrix(n, 3, rng) * perturbation;
  return standardize(r + l * l.transpose());
}

CorrelationMatrix block_factor_mixture(std::size_t blocks, std::size_t per_block, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(blocks * per_block);
  const auto nb = static_cast<Eigen::Index>(blocks);
  Rng rng(seed);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, nb + 1);
  Eigen::VectorXd noise(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index b = i / static_cast<Eigen::Index>(per_block);
    l(i, b) = 0.75 * (0.7 + 0.3 * rng.uniform());
    if (rng.uniform() < 0.3) {
      const auto other = static_cast<Eigen::Index>(rng.below(blocks));
      if (other != b) l(i, other) = (rng.uniform() < 0.5 ? -1.0 : 1.0) * 0.75 * (0.5 + 0.4 * rng.uniform());
    }
    l(i, nb) = 0.25 * rng.normal();
    noise(i) = 0.3 + 0.3 * rng.uniform();
  }
  Eigen::MatrixXd c = l * l.transpose();
  c.diagonal() += noise;
  return standardize(c);
}

CorrelationMatrix block_model(std::size_t blocks, std::size_t per_block, double within, double between) {
  const auto n = static_cast<Eigen::Index>(blocks * per_block);
  const auto per = static_cast<Eigen::Index>(per_block);
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) r(i, j) = i == j ? 1.0 : (i / per == j / per ? within : between);
  return CorrelationMatrix::from_values(std::move(r));
}

CorrelationMatrix single_factor(std::size_t n, double loading) {
  return equicorrelated(n, loading * loading);
}

CorrelationMatrix equicorrelated(std::size_t n, double rho) {
  const auto d = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd r = Eigen::MatrixXd::Constant(d, d, rho);
  r.diagonal().setOnes();
  return CorrelationMatrix::from_values(std::move(r));
}

CorrelationMatrix planted_triangle(std::size_t n, double rho, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(n);
  Rng rng(seed);
  const Eigen::MatrixXd l = normal_matrix(d, 4, rng) * 0.08;
  Eigen::MatrixXd c = l * l.transpose();
  c.diagonal().array() += 1.0;
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      if (i != j) c(i, j) = rho;
  return standardize(c);
}

data::NodeLabels block_labels(std::size_t blocks, std::size_t per_block) {
  std::vector<std::string> names;
  std::vector<std::string> systems;
  for (std::size_t i = 0; i < blocks * per_block; ++i) {
    names.push_back("n" + std::to_string(i));
    systems.push_back("B" + std::to_string(i / per_block));
  }
  return data::NodeLabels::from_assignments(std::move(names), systems);
}

Eigen::MatrixXd factor_time_series(const Eigen::MatrixXd& loadings, std::size_t frames, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index n = loadings.rows();
  const auto t = static_cast<Eigen::Index>(frames);
  const Eigen::MatrixXd factors = normal_matrix(t, loadings.cols(), rng);
  Eigen::MatrixXd x = factors * loadings.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double unique_sd = std::sqrt(1.0 - loadings.row(i).squaredNorm());
    for (Eigen::Index f = 0; f < t; ++f) x(f, i) += unique_sd * rng.normal();
  }
  return x;
}

double log_det_eigen(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().array().log().sum();
}

double entropy_oracle(const CorrelationMatrix& cov, const Subset& subset) {
  const double k = static_cast<double>(subset.size());
  return 0.5 * k * std::log(2.0 * std::numbers::pi * std::numbers::e) + 0.5 * log_det_eigen(cov.submatrix(subset));
}

double tc_oracle(const CorrelationMatrix& cov, const Subset& subset) {
  double sum_marginals = 0.0;
  for (std::size_t i : subset) sum_marginals += entropy_oracle(cov, Subset{i});
  return sum_marginals - entropy_oracle(cov, subset);
}

}  // namespace oinfo::testing
