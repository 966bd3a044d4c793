#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "oinfo/subset.hpp"

namespace oinfo {

inline constexpr double kStructureTolerance = 1e-12;

/// Squared Cholesky pivots at or below this floor count as singular. Inputs
/// are unit-diagonal, so the floor is an absolute bound on conditional
/// variances.
inline constexpr double kPivotFloor = 1e-12;

/// Symmetric positive-definite matrix with unit diagonal. Immutable once built.
class CorrelationMatrix {
 public:
  /// Validates symmetry, unit diagonal, entry range and positive
  /// definiteness. Throws InvalidMatrix or SingularSubmatrix.
  static CorrelationMatrix from_values(Eigen::MatrixXd values, std::vector<std::string> node_names = {});

  /// Standardizes a covariance matrix to correlations. TC, DTC and O-information
  /// are invariant under per-variable rescaling, so no information is lost.
  static CorrelationMatrix from_covariance(const Eigen::MatrixXd& covariance,
                                           std::vector<std::string> node_names = {});

  static CorrelationMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& node_names() const noexcept { return node_names_; }

  /// Principal submatrix on `subset`. Throws IndexOutOfRange.
  Eigen::MatrixXd submatrix(const Subset& subset) const;

  /// Same matrix with rows/columns reordered: result(i, j) = this(perm[i], perm[j]).
  CorrelationMatrix permuted(const std::vector<std::size_t>& perm) const;

 private:
  CorrelationMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
      : values_(std::move(values)), node_names_(std::move(names)) {}

  Eigen::MatrixXd values_;
  std::vector<std::string> node_names_;
};

/// log det of a symmetric positive-definite matrix via Cholesky. Throws
/// SingularSubmatrix when a pivot falls to kPivotFloor or below.
double log_det_spd(const Eigen::MatrixXd& m);

/// True when `m` passes the same Cholesky test as log_det_spd.
bool is_positive_definite(const Eigen::MatrixXd& m);

}  // namespace oinfo
