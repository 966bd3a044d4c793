#include "oinfo/correlation_matrix.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <optional>

#include "oinfo/error.hpp"

namespace oinfo {

namespace {

std::optional<double> try_log_det(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto& lower = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double pivot = lower(i, i) * lower(i, i);
    if (!(pivot > kPivotFloor)) return std::nullopt;
    sum += std::log(pivot);
  }
  return sum;
}

std::string entry_name(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

double log_det_spd(const Eigen::MatrixXd& m) {
  if (auto ld = try_log_det(m)) return *ld;
  throw Error(ErrorCode::SingularSubmatrix,
              "Cholesky factorization failed on a " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()) + " submatrix");
}

bool is_positive_definite(const Eigen::MatrixXd& m) { return try_log_det(m).has_value(); }

CorrelationMatrix CorrelationMatrix::from_values(Eigen::MatrixXd values, std::vector<std::string> node_names) {
  const Eigen::Index n = values.rows();
  if (n == 0 || values.cols() != n)
    throw Error(ErrorCode::InvalidMatrix, "correlation matrix must be square and non-empty");
  if (!node_names.empty() && node_names.size() != static_cast<std::size_t>(n))
    throw Error(ErrorCode::ShapeMismatch, "node name count does not match matrix dimension");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidMatrix, "non-finite entry at " + entry_name(i, j));
      if (std::abs(v - values(j, i)) > kStructureTolerance)
        throw Error(ErrorCode::InvalidMatrix, "matrix not symmetric at " + entry_name(i, j));
      if (i == j && std::abs(v - 1.0) > kStructureTolerance)
        throw Error(ErrorCode::InvalidMatrix, "diagonal entry " + entry_name(i, i) + " is not 1");
      if (i != j && (v < -1.0 || v > 1.0))
        throw Error(ErrorCode::InvalidMatrix, "entry " + entry_name(i, j) + " outside [-1, 1]");
    }
  }
  if (!is_positive_definite(values))
    throw Error(ErrorCode::SingularSubmatrix, "correlation matrix is not positive definite");
  return CorrelationMatrix(std::move(values), std::move(node_names));
}

CorrelationMatrix CorrelationMatrix::from_covariance(const Eigen::MatrixXd& covariance,
                                                     std::vector<std::string> node_names) {
  const Eigen::Index n = covariance.rows();
  if (n == 0 || covariance.cols() != n)
    throw Error(ErrorCode::InvalidMatrix, "covariance matrix must be square and non-empty");
  Eigen::VectorXd inv_sd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double var = covariance(i, i);
    if (!(var > 0.0))
      throw Error(ErrorCode::NonPositiveVariance, "variance of node " + std::to_string(i) + " is not positive");
    inv_sd(i) = 1.0 / std::sqrt(var);
  }
  Eigen::MatrixXd r = inv_sd.asDiagonal() * covariance * inv_sd.asDiagonal();
  r = 0.5 * (r + r.transpose()).eval();
  r.diagonal().setOnes();
  return from_values(std::move(r), std::move(node_names));
}

CorrelationMatrix CorrelationMatrix::identity(std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  return CorrelationMatrix(Eigen::MatrixXd::Identity(dim, dim), {});
}

Eigen::MatrixXd CorrelationMatrix::submatrix(const Subset& subset) const {
  subset.check_bounds(dim());
  const auto k = static_cast<Eigen::Index>(subset.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto i = static_cast<Eigen::Index>(subset[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b)
      out(a, b) = values_(i, static_cast<Eigen::Index>(subset[static_cast<std::size_t>(b)]));
  }
  return out;
}

CorrelationMatrix CorrelationMatrix::permuted(const std::vector<std::size_t>& perm) const {
  const auto n = static_cast<Eigen::Index>(dim());
  if (perm.size() != dim()) throw Error(ErrorCode::ShapeMismatch, "permutation length mismatch");
  Eigen::MatrixXd out(n, n);
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = values_(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
                          static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]));
    if (!node_names_.empty()) names.push_back(node_names_[perm[static_cast<std::size_t>(i)]]);
  }
  return CorrelationMatrix(std::move(out), std::move(names));
}

}  // namespace oinfo
