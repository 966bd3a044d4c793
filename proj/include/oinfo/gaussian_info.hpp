#pragma once

// Closed-form information measures for multivariate Gaussian systems.
//
// Every function takes the full correlation matrix plus the subset that
// selects the subsystem, and works from log-determinants of principal
// submatrices. All results are in nats; convert with oinfo::from_nats.
//
// Conventions:
//   H(X)   joint entropy            (k/2) ln(2 pi e) + (1/2) ln det R_X
//   TC(X)  total correlation        -(1/2) ln det R_X
//   DTC(X) dual total correlation   (1 - k) H(X) + sum_i H(X^{-i})
//   O(X)   O-information            TC - DTC
//   S(X)   S-information            TC + DTC
//   C(X)   description complexity   TC - TC/k - mean_i TC(X^{-i})

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "oinfo/correlation_matrix.hpp"
#include "oinfo/subset.hpp"

namespace oinfo::gaussian {

/// Measures that are mathematically non-negative are clamped to 0 when they
/// come out negative by no more than this amount.
inline constexpr double kNonNegativeSlack = 1e-9;

inline constexpr std::size_t kDefaultExactLimit = 16;

/// Number of times a value was clamped into [0, inf) since process start.
std::uint64_t clamp_count() noexcept;

double entropy(double variance);
double joint_entropy(const CorrelationMatrix& cov, const Subset& subset);
double mutual_information(double rho);

double total_correlation(const CorrelationMatrix& cov, const Subset& subset);
double dual_total_correlation(const CorrelationMatrix& cov, const Subset& subset);
double o_information(const CorrelationMatrix& cov, const Subset& subset);

/// (2 - k) TC(X) + sum_i TC(X^{-i}). Separate code path from o_information,
/// kept for cross-validation.
double o_information_via_tc(const CorrelationMatrix& cov, const Subset& subset);

double s_information(const CorrelationMatrix& cov, const Subset& subset);
double description_complexity(const CorrelationMatrix& cov, const Subset& subset);
double normalized_o_information(const CorrelationMatrix& cov, const Subset& subset);

/// I(X1;X2) - I(X1;X2|X3) for the ordered triple (X1, X2, X3).
double co_information_3(const CorrelationMatrix& cov, std::array<std::size_t, 3> nodes);
double co_information_3(const CorrelationMatrix& cov, const Subset& subset);

struct MeasureReport {
  Subset subset;
  double joint_entropy = 0.0;
  double total_correlation = 0.0;
  double dual_total_correlation = 0.0;
  double o_information = 0.0;
  double s_information = 0.0;
  double description_complexity = 0.0;
  double normalized_o = 0.0;
};

/// All measures for one subsystem from k + 1 log-determinants. Requires k >= 3.
MeasureReport measure_report(const CorrelationMatrix& cov, const Subset& subset);

enum class TseMode { Exact, Sampled };

struct TseOptions {
  TseMode mode = TseMode::Exact;
  std::size_t samples_per_scale = 0;
  std::uint64_t seed = 0;
  std::size_t exact_limit = kDefaultExactLimit;
};

struct TseResult {
  double value = 0.0;
  TseMode mode = TseMode::Exact;
  /// Entry i-1 holds (i/k) TC(X) - E[TC(X^gamma)] over |gamma| = i.
  std::vector<double> per_scale_deficit;
  std::size_t samples_per_scale = 0;
};

/// TSE complexity as the sum over scales of integration deficits. In sampled
/// mode each scale uses up to samples_per_scale distinct subsets drawn without
/// replacement; scales with no more subsets than that are enumerated.
TseResult tse_complexity(const CorrelationMatrix& cov, const Subset& subset, const TseOptions& options = {});

/// TSE complexity as the average bipartition mutual information summed over
/// scales 1..floor(k/2). For even k the midpoint scale carries weight 1/2,
/// which makes the two forms equal.
double tse_bipartition_form(const CorrelationMatrix& cov, const Subset& subset,
                            std::size_t exact_limit = kDefaultExactLimit);

}  // namespace oinfo::gaussian
