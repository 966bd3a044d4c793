#include "oinfo/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "oinfo/error.hpp"

namespace oinfo::data {

namespace {

std::vector<std::string> index_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

Eigen::MatrixXd table_to_matrix(const csv::Table& table, std::size_t width) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    if (row.size() != width)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + " has " + std::to_string(row.size()) +
                                             " fields, expected " + std::to_string(width));
    for (std::size_t c = 0; c < width; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = csv::parse_double(row[c], line, c + 1);
  }
  return m;
}

// Column-wise z-score with population standard deviation.
Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
  Eigen::MatrixXd out = x.rowwise() - x.colwise().mean();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(out.rows()));
    if (!(sd > 0.0))
      throw Error(ErrorCode::ZeroVariance, "node '" + names[static_cast<std::size_t>(c)] + "' is constant");
    out.col(c) /= sd;
  }
  return out;
}

Eigen::MatrixXd pearson(const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered;
  const Eigen::Index n = cov.rows();
  Eigen::VectorXd inv_sd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(cov(i, i) > 0.0))
      throw Error(ErrorCode::ZeroVariance, "node '" + names[static_cast<std::size_t>(i)] + "' is constant");
    inv_sd(i) = 1.0 / std::sqrt(cov(i, i));
  }
  Eigen::MatrixXd r = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::clamp(0.5 * (r(i, j) + r(j, i)), -1.0, 1.0);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

void check_compatible(std::span<const TimeSeriesPanel> panels) {
  if (panels.empty()) throw Error(ErrorCode::EmptyInput, "no time series panels given");
  const auto& first = panels.front();
  for (const auto& p : panels) {
    if (p.node_count() != first.node_count())
      throw Error(ErrorCode::ShapeMismatch, "run '" + p.run_id + "' has " + std::to_string(p.node_count()) +
                                                " nodes, expected " + std::to_string(first.node_count()));
    if (p.node_names != first.node_names)
      throw Error(ErrorCode::ShapeMismatch, "run '" + p.run_id + "' node names or order differ");
  }
}

bool is_label_header(const std::vector<std::string>& row) {
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  return row.size() == 2 && (lower(row[0]) == "node" || lower(row[0]) == "name") && lower(row[1]) == "system";
}

}  // namespace

TimeSeriesPanel load_timeseries(const std::filesystem::path& path, const csv::Options& options) {
  const auto table = csv::read(path, options);
  if (table.rows.empty()) throw Error(ErrorCode::EmptyInput, "no frames in '" + path.string() + "'");
  const std::size_t width = table.header.empty() ? table.rows.front().size() : table.header.size();
  TimeSeriesPanel panel;
  panel.frames = table_to_matrix(table, width);
  panel.node_names = table.header.empty() ? index_names(width) : table.header;
  panel.run_id = path.stem().string();
  if (panel.frame_count() < 2)
    throw Error(ErrorCode::EmptyInput, "'" + path.string() + "' needs at least 2 frames");
  return panel;
}

TimeSeriesPanel append_runs(std::span<const TimeSeriesPanel> panels) {
  check_compatible(panels);
  Eigen::Index total = 0;
  for (const auto& p : panels) total += p.frames.rows();
  TimeSeriesPanel out;
  out.node_names = panels.front().node_names;
  out.frames.resize(total, panels.front().frames.cols());
  Eigen::Index row = 0;
  for (const auto& p : panels) {
    out.frames.middleRows(row, p.frames.rows()) = p.frames;
    row += p.frames.rows();
    out.run_id += (out.run_id.empty() ? "" : "+") + p.run_id;
  }
  return out;
}

CorrelationEstimate correlation_from_panels(std::span<const TimeSeriesPanel> panels,
                                            const AggregationOptions& options) {
  check_compatible(panels);
  const auto& names = panels.front().node_names;
  std::size_t total_frames = 0;
  for (const auto& p : panels) total_frames += p.frame_count();
  if (total_frames < 3) throw Error(ErrorCode::EmptyInput, "need at least 3 frames in total");

  CorrelationEstimate out;
  out.node_names = names;
  if (options.mode == Aggregation::MeanOfRuns) {
    const auto n = static_cast<Eigen::Index>(names.size());
    out.values = Eigen::MatrixXd::Zero(n, n);
    for (const auto& p : panels) out.values += pearson(p.frames, names);
    out.values /= static_cast<double>(panels.size());
    out.values.diagonal().setOnes();
    return out;
  }
  std::vector<TimeSeriesPanel> prepared(panels.begin(), panels.end());
  if (options.zscore_runs)
    for (auto& p : prepared) p.frames = zscore_columns(p.frames, names);
  out.values = pearson(append_runs(prepared).frames, names);
  return out;
}

ShrinkageConfig::ShrinkageConfig(double lambda, double jitter) : lambda_(lambda), jitter_(jitter) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw Error(ErrorCode::InvalidConfig, "shrinkage lambda must lie in [0, 1), got " + csv::format_double(lambda));
  if (!(jitter >= 0.0) || !std::isfinite(jitter))
    throw Error(ErrorCode::InvalidConfig, "jitter must be non-negative, got " + csv::format_double(jitter));
}

RepairResult validate_or_repair(const CorrelationEstimate& estimate, const ShrinkageConfig& config) {
  const Eigen::MatrixXd& r = estimate.values;
  if (r.rows() == 0 || r.rows() != r.cols()) throw Error(ErrorCode::InvalidMatrix, "matrix must be square");
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > kStructureTolerance)
    throw Error(ErrorCode::InvalidMatrix, "matrix is not symmetric");

  try {
    return {CorrelationMatrix::from_values(r, estimate.node_names), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularSubmatrix) throw;
  }
  if (config.lambda() == 0.0 && config.jitter() == 0.0)
    throw Error(ErrorCode::IrreparableMatrix, "matrix is not positive definite and no shrinkage was configured");

  const auto n = r.rows();
  Eigen::MatrixXd shrunk = (1.0 - config.lambda()) * r +
                           (config.lambda() + config.jitter()) * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd inv_sd = shrunk.diagonal().cwiseSqrt().cwiseInverse();
  shrunk = inv_sd.asDiagonal() * shrunk * inv_sd.asDiagonal();
  shrunk = 0.5 * (shrunk + shrunk.transpose()).eval();
  shrunk.diagonal().setOnes();
  try {
    return {CorrelationMatrix::from_values(std::move(shrunk), estimate.node_names), true};
  } catch (const Error& e) {
    throw Error(ErrorCode::IrreparableMatrix, std::string("still invalid after shrinkage: ") + e.what());
  }
}

CorrelationEstimate load_matrix_csv(const std::filesystem::path& path, const csv::Options& options) {
  const auto table = csv::read(path, options);
  if (table.rows.empty()) throw Error(ErrorCode::EmptyInput, "no rows in '" + path.string() + "'");
  const std::size_t n = table.rows.size();
  if (!table.header.empty() && table.header.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "header names " + std::to_string(table.header.size()) +
                                              " nodes but matrix has " + std::to_string(n) + " rows");
  CorrelationEstimate out;
  out.values = table_to_matrix(table, n);
  out.node_names = table.header;
  return out;
}

CorrelationEstimate as_correlation(CorrelationEstimate estimate) {
  const Eigen::VectorXd diag = estimate.values.diagonal();
  if ((diag.array() - 1.0).abs().maxCoeff() <= kStructureTolerance) return estimate;
  if (!(diag.array() > 0.0).all() || !diag.allFinite())
    throw Error(ErrorCode::NonPositiveVariance, "covariance diagonal must be positive");
  const Eigen::VectorXd inv = diag.array().sqrt().inverse();
  const Eigen::MatrixXd scaled = inv.asDiagonal() * estimate.values * inv.asDiagonal();
  estimate.values = 0.5 * (scaled + scaled.transpose());
  estimate.values.diagonal().setOnes();
  return estimate;
}

CorrelationMatrix load_correlation_matrix(const std::filesystem::path& path, const csv::Options& options) {
  auto estimate = as_correlation(load_matrix_csv(path, options));
  return CorrelationMatrix::from_values(std::move(estimate.values), std::move(estimate.node_names));
}

std::string matrix_to_csv(const Eigen::MatrixXd& values, const std::vector<std::string>& node_names,
                          char delimiter) {
  std::string out;
  if (!node_names.empty()) {
    for (std::size_t i = 0; i < node_names.size(); ++i) {
      if (i) out += delimiter;
      out += node_names[i];
    }
    out += '\n';
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out += delimiter;
      out += csv::format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

void save_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                     const std::vector<std::string>& node_names, char delimiter) {
  csv::write_atomically(path, matrix_to_csv(values, node_names, delimiter));
}

std::vector<std::vector<std::size_t>> NodeLabels::members() const {
  std::vector<std::vector<std::size_t>> out(systems.size());
  for (std::size_t node = 0; node < system_of.size(); ++node) out[system_of[node]].push_back(node);
  return out;
}

NodeLabels NodeLabels::from_assignments(std::vector<std::string> node_names,
                                        const std::vector<std::string>& system_per_node) {
  if (node_names.size() != system_per_node.size())
    throw Error(ErrorCode::LabelMismatch, "one system label per node required");
  if (node_names.empty()) throw Error(ErrorCode::EmptyInput, "label set is empty");
  NodeLabels labels;
  labels.node_names = std::move(node_names);
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& system : system_per_node) {
    auto [it, inserted] = index.emplace(system, labels.systems.size());
    if (inserted) labels.systems.push_back(system);
    labels.system_of.push_back(it->second);
  }
  return labels;
}

NodeLabels load_labels(const std::filesystem::path& path, const std::vector<std::string>& node_names,
                       char delimiter) {
  const auto table = csv::read(path, {.delimiter = delimiter, .header = csv::Options::Header::Absent});
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < node_names.size(); ++i) position.emplace(node_names[i], i);

  std::vector<std::string> system_per_node(node_names.size());
  std::vector<bool> seen(node_names.size(), false);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (r == 0 && is_label_header(row)) continue;
    if (row.size() != 2)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(table.line_numbers[r]) +
                                             ": expected 'node,system'");
    auto it = position.find(row[0]);
    if (it == position.end()) throw Error(ErrorCode::UnknownNode, "node '" + row[0] + "' is not in the matrix");
    if (seen[it->second]) throw Error(ErrorCode::DuplicateNode, "node '" + row[0] + "' listed more than once");
    seen[it->second] = true;
    system_per_node[it->second] = row[1];
  }
  for (std::size_t i = 0; i < node_names.size(); ++i)
    if (!seen[i]) throw Error(ErrorCode::UnknownNode, "node '" + node_names[i] + "' has no system label");
  return NodeLabels::from_assignments(node_names, system_per_node);
}

std::vector<std::string> node_names_or_indices(const CorrelationMatrix& matrix) {
  return matrix.node_names().empty() ? index_names(matrix.dim()) : matrix.node_names();
}

}  // namespace oinfo::data
