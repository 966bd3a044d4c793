#pragma once

// Summary statistics over sampled or optimized subsets: node and pair
// participation, participation against functional connectivity, subset
// overlap, and per-system enrichment.

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oinfo/correlation_matrix.hpp"
#include "oinfo/data_model.hpp"
#include "oinfo/subset_search.hpp"

namespace oinfo::analytics {

struct ParticipationTable {
  std::size_t n_nodes = 0;
  std::vector<std::uint64_t> node_counts;
  std::vector<std::uint64_t> pair_counts;  // n_nodes x n_nodes, row-major, zero diagonal
  std::uint64_t total_qualifying = 0;

  std::uint64_t pair(std::size_t i, std::size_t j) const { return pair_counts[i * n_nodes + j]; }
};

using RecordFilter = std::function<bool(const search::MeasureReport&)>;

/// Keeps synergy-dominated subsets (O-information < 0).
RecordFilter negative_o_information();

/// Counts node and unordered-pair appearances across the records that pass
/// `filter`. Throws EmptyAfterFilter when none do.
ParticipationTable participation(std::span<const search::SampleRecord> records, std::size_t n_nodes,
                                 const RecordFilter& filter = negative_o_information());

/// Same counts over an explicit list of subsets (all of which qualify).
ParticipationTable participation(std::span<const Subset> subsets, std::size_t n_nodes);

double pearson(std::span<const double> x, std::span<const double> y);

/// Rank correlation with average ranks for ties. Throws LengthMismatch or
/// DegenerateInput (fewer than 3 points or a constant input).
double spearman(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> x);

struct PairScatterRow {
  std::size_t i = 0;
  std::size_t j = 0;
  double abs_fc = 0.0;
  std::uint64_t participation = 0;
};

struct ParticipationVsFc {
  double rho = 0.0;
  std::size_t pair_count = 0;
  /// At most max_rows rows; when capped, a seeded uniform subsample in pair order.
  std::vector<PairScatterRow> scatter;
};

inline constexpr std::size_t kMaxScatterRows = 1'000'000;

/// Spearman correlation between |rho_ij| and pair participation over all
/// unordered pairs.
ParticipationVsFc participation_vs_fc(const ParticipationTable& table, const CorrelationMatrix& cov,
                                      std::size_t max_rows = kMaxScatterRows, std::uint64_t seed = 0);

double jaccard(const Subset& a, const Subset& b);

/// Pairwise |A ∩ B| / |A ∪ B|. Needs at least 2 subsets (EmptyInput).
Eigen::MatrixXd jaccard_matrix(std::span<const Subset> subsets);

struct SystemEnrichment {
  std::vector<std::string> systems;
  std::vector<std::size_t> sizes;
  /// Mean participation of the system's nodes over the mean participation
  /// of all nodes; 1 is what uniform selection would give.
  std::vector<double> ratio;
};

SystemEnrichment system_enrichment(const ParticipationTable& table, const data::NodeLabels& labels);

/// Equal-weight mean of enrichment ratios over several tables (for example
/// one per subset size). All inputs must list the same systems.
SystemEnrichment average_enrichment(std::span<const SystemEnrichment> per_size);

}  // namespace oinfo::analytics
