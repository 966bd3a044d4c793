#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "oinfo/correlation_matrix.hpp"
#include "oinfo/csv.hpp"

namespace oinfo::data {

/// T frames (rows) by N nodes (columns) of one recording run.
struct TimeSeriesPanel {
  Eigen::MatrixXd frames;
  std::vector<std::string> node_names;
  std::string run_id;

  std::size_t frame_count() const noexcept { return static_cast<std::size_t>(frames.rows()); }
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(frames.cols()); }
};

/// Rejects non-numeric and non-finite cells (ParseError naming line and
/// column), ragged rows, and files with fewer than 2 frames (EmptyInput).
/// Without a header, nodes are named by column index.
TimeSeriesPanel load_timeseries(const std::filesystem::path& path, const csv::Options& options = {});

/// Stacks runs frame-wise. Node count and names must agree (ShapeMismatch).
TimeSeriesPanel append_runs(std::span<const TimeSeriesPanel> panels);

enum class Aggregation { Concatenate, MeanOfRuns };

struct AggregationOptions {
  Aggregation mode = Aggregation::Concatenate;
  /// z-score each run's columns before appending them.
  bool zscore_runs = true;
};

/// Symmetric matrix that has not yet been checked for positive definiteness.
struct CorrelationEstimate {
  Eigen::MatrixXd values;
  std::vector<std::string> node_names;
};

/// Single Pearson correlation per node pair over all runs. Throws
/// ZeroVariance for a constant node, ShapeMismatch, or EmptyInput when fewer
/// than 3 frames are available in total.
CorrelationEstimate correlation_from_panels(std::span<const TimeSeriesPanel> panels,
                                            const AggregationOptions& options = {});

/// Shrinkage toward the identity. lambda in [0, 1), jitter >= 0.
class ShrinkageConfig {
 public:
  ShrinkageConfig() = default;
  /// Throws InvalidConfig outside the admissible ranges.
  ShrinkageConfig(double lambda, double jitter);

  double lambda() const noexcept { return lambda_; }
  double jitter() const noexcept { return jitter_; }

 private:
  double lambda_ = 0.0;
  double jitter_ = 0.0;
};

struct RepairResult {
  CorrelationMatrix matrix;
  bool repaired = false;
};

/// Returns the input unchanged when it is already a valid correlation matrix.
/// Otherwise forms (1 - lambda) R + lambda I + jitter I, re-standardizes the
/// diagonal to 1 and retries; IrreparableMatrix if that still fails or no
/// repair was configured.
RepairResult validate_or_repair(const CorrelationEstimate& estimate, const ShrinkageConfig& config = {});

/// N x N matrix, optional header row of node names.
CorrelationEstimate load_matrix_csv(const std::filesystem::path& path, const csv::Options& options = {});

/// Rescales a covariance estimate to unit diagonal; a correlation estimate
/// passes through unchanged. NonPositiveVariance on a non-positive diagonal.
CorrelationEstimate as_correlation(CorrelationEstimate estimate);

/// Loads and validates. Matrices whose diagonal is not 1 are treated as
/// covariances and standardized.
CorrelationMatrix load_correlation_matrix(const std::filesystem::path& path, const csv::Options& options = {});

/// Full-precision text; reloading reproduces every entry exactly.
std::string matrix_to_csv(const Eigen::MatrixXd& values, const std::vector<std::string>& node_names,
                          char delimiter = ',');
void save_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                     const std::vector<std::string>& node_names, char delimiter = ',');

/// Assignment of every node to one functional system.
struct NodeLabels {
  std::vector<std::string> node_names;
  std::vector<std::string> systems;       // distinct labels, ordered by first member node
  std::vector<std::size_t> system_of;     // node index -> index into systems

  std::size_t system_count() const noexcept { return systems.size(); }
  std::vector<std::vector<std::size_t>> members() const;

  /// Builds from a parallel list of system names, one per node.
  static NodeLabels from_assignments(std::vector<std::string> node_names,
                                     const std::vector<std::string>& system_per_node);
};

/// Two columns: node name, system name. Every node in `node_names` must be
/// listed exactly once (UnknownNode / DuplicateNode).
NodeLabels load_labels(const std::filesystem::path& path, const std::vector<std::string>& node_names,
                       char delimiter = ',');

/// Node names of `matrix`, or "0".."N-1" when it carries none.
std::vector<std::string> node_names_or_indices(const CorrelationMatrix& matrix);

}  // namespace oinfo::data
