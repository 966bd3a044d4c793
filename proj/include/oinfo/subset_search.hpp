#pragma once

// Random sampling and simulated annealing over k-node subsystems.
//
// Every random draw is made from a generator seeded by derive_seed(master,
// stream, index), so results depend only on (matrix, config, master seed)
// and never on worker count or scheduling.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oinfo/combinatorics.hpp"
#include "oinfo/correlation_matrix.hpp"
#include "oinfo/data_model.hpp"
#include "oinfo/gaussian_info.hpp"
#include "oinfo/parallel.hpp"
#include "oinfo/rng.hpp"

namespace oinfo::search {

using gaussian::MeasureReport;

struct SampleRecord {
  std::size_t sample_index = 0;
  std::uint64_t seed = 0;
  MeasureReport measures;

  const Subset& subset() const noexcept { return measures.subset; }
};

/// Uniform k-subset of [0, n).
Subset random_subset(std::size_t n, std::size_t k, Rng& rng);

/// n_samples independent uniform k-subsets with full measure reports.
/// Requires 3 <= k <= N (SubsetTooSmall / SubsetTooLarge).
std::vector<SampleRecord> sample_random_subsets(const CorrelationMatrix& cov, std::size_t k, std::size_t n_samples,
                                                std::uint64_t master_seed, const Execution& exec = {});

struct NegativeFraction {
  std::size_t negatives = 0;
  std::size_t total = 0;
  double fraction = 0.0;
  /// Binomial standard error sqrt(f (1 - f) / total).
  double standard_error = 0.0;
  BigInt population;          // C(N, k)
  BigInt extrapolated_count;  // round(C(N, k) * negatives / total)
};

/// Fraction of records with O-information < 0 and the implied number of
/// negative subsets among all C(n_nodes, k). Records must share one k.
NegativeFraction fraction_negative(std::span<const SampleRecord> records, std::size_t n_nodes);

/// round(C(n, k) * numerator / denominator) in exact integer arithmetic.
BigInt extrapolate_count(std::uint64_t n, std::uint64_t k, const BigInt& numerator, const BigInt& denominator);

enum class Measure {
  OInformation,
  TotalCorrelation,
  DualTotalCorrelation,
  SInformation,
  DescriptionComplexity,
  NormalizedO,
  JointEntropy,
};

enum class Direction { Minimize, Maximize };

struct Objective {
  Measure measure = Measure::OInformation;
  Direction direction = Direction::Minimize;
};

std::string_view to_string(Measure m) noexcept;
/// Accepts the names produced by to_string plus the short forms
/// o, oi, tc, dtc, s, c. Throws InvalidConfig.
Measure parse_measure(std::string_view name);

double measure_value(const MeasureReport& report, Measure m) noexcept;

/// Value of a single measure, computing no more than it needs.
double evaluate(const CorrelationMatrix& cov, const Subset& subset, Measure m);

inline constexpr double kDefaultTemperatureDecay = 0.998619;

struct AnnealConfig {
  std::size_t subset_size = 10;
  std::size_t steps = 10000;
  double t0 = 1.0;
  /// Per-step decay; the default cools by six decades over 10,000 steps.
  double t_exp = kDefaultTemperatureDecay;
  /// Relative frequencies of replacing 1, 2 or 3 members per proposal.
  std::array<double, 3> flip_probs{0.68, 0.27, 0.04};
  Objective objective;
  std::uint64_t seed = 0;
  bool record_trajectory = false;

  /// Throws InvalidConfig.
  void validate() const;
  std::array<double, 3> normalized_flip_probs() const;
  /// T_c(step) = t0 * t_exp^step.
  double temperature(std::size_t step) const;
};

struct TrajectoryPoint {
  std::size_t step = 0;
  double current_value = 0.0;
  double temperature = 0.0;
};

struct AnnealRun {
  Subset best_subset{0};
  double best_value = 0.0;
  std::size_t best_step = 0;  // 0 means the initial subset
  std::size_t accepted_moves = 0;
  std::size_t singular_proposals = 0;
  std::vector<TrajectoryPoint> trajectory;
  AnnealConfig config;
};

/// One simulated-annealing run from a uniform random start. Proposals whose
/// submatrix is singular are rejected outright.
AnnealRun anneal(const CorrelationMatrix& cov, const AnnealConfig& config);

struct SweepLevel {
  std::size_t subset_size = 0;
  std::vector<AnnealRun> runs;
  double mean_best = 0.0;
  /// Best of the per-run bests in the objective's direction.
  double best_overall = 0.0;
  std::size_t unique_best_subsets = 0;
};

/// runs_per_k independent runs per subset size; run r at size k uses seed
/// derive_seed(template.seed, k, r).
std::vector<SweepLevel> anneal_sweep(const CorrelationMatrix& cov, std::span<const std::size_t> subset_sizes,
                                     std::size_t runs_per_k, const AnnealConfig& config_template,
                                     const Execution& exec = {});

/// Samples whose nodes touch exactly `systems_count` distinct systems: the
/// systems are chosen uniformly, then k nodes are split over them uniformly
/// among compositions with at least one node per system.
std::vector<SampleRecord> sample_stratified_by_systems(const CorrelationMatrix& cov, const data::NodeLabels& labels,
                                                       std::size_t k, std::size_t n_samples,
                                                       std::size_t systems_count, std::uint64_t master_seed,
                                                       const Execution& exec = {});

}  // namespace oinfo::search
