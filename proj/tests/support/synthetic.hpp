#pragma once

// Seeded synthetic systems and brute-force oracles shared by the test suites.
// The oracles use eigenvalues rather than Cholesky so they stay independent
// of the library's log-determinant path.

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "oinfo/correlation_matrix.hpp"
#include "oinfo/data_model.hpp"
#include "oinfo/subset.hpp"

namespace oinfo::testing {

/// Standardized A A^T with A an n x (n + extra) standard normal matrix.
CorrelationMatrix random_correlation(std::size_t n, std::uint64_t seed, std::size_t extra = 2);

/// Strongly positive within-block and weakly negative between-block
/// correlations (as after global signal regression), plus a seeded rank-3
/// perturbation.
CorrelationMatrix gsr_block_matrix(std::size_t blocks = 7, std::size_t per_block = 3, double within = 0.6,
                                   double between = -0.1, double perturbation = 0.15, std::uint64_t seed = 7);

/// Block factors with signed bridge loadings onto other blocks and a weak
/// global factor.
CorrelationMatrix block_factor_mixture(std::size_t blocks = 10, std::size_t per_block = 5, std::uint64_t seed = 11);

/// Exact block model: `within` inside blocks, `between` across.
CorrelationMatrix block_model(std::size_t blocks, std::size_t per_block, double within, double between);

CorrelationMatrix single_factor(std::size_t n, double loading);
CorrelationMatrix equicorrelated(std::size_t n, double rho);

/// Weak random background on n nodes with nodes 0, 1, 2 forming an
/// equicorrelated triangle at `rho` (negative: synergistic).
CorrelationMatrix planted_triangle(std::size_t n, double rho, std::uint64_t seed);

/// Labels "B0", "B1", ... with consecutive blocks of per_block nodes.
data::NodeLabels block_labels(std::size_t blocks, std::size_t per_block);

/// T x N samples of X = F L^T + noise with unit marginal variances, so that
/// corr(X_i, X_j) = sum_f L_if L_jf.
Eigen::MatrixXd factor_time_series(const Eigen::MatrixXd& loadings, std::size_t frames, std::uint64_t seed);

double log_det_eigen(const Eigen::MatrixXd& m);
double entropy_oracle(const CorrelationMatrix& cov, const Subset& subset);
double tc_oracle(const CorrelationMatrix& cov, const Subset& subset);

}  // namespace oinfo::testing
