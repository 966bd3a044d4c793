#include "oinfo/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oinfo/error.hpp"
#include "oinfo/rng.hpp"

namespace oinfo::analytics {

namespace {

void count_subset(ParticipationTable& t, const Subset& s) {
  s.check_bounds(t.n_nodes);
  for (std::size_t a = 0; a < s.size(); ++a) {
    ++t.node_counts[s[a]];
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      ++t.pair_counts[s[a] * t.n_nodes + s[b]];
      ++t.pair_counts[s[b] * t.n_nodes + s[a]];
    }
  }
  ++t.total_qualifying;
}

ParticipationTable empty_table(std::size_t n_nodes) {
  ParticipationTable t;
  t.n_nodes = n_nodes;
  t.node_counts.assign(n_nodes, 0);
  t.pair_counts.assign(n_nodes * n_nodes, 0);
  return t;
}

}  // namespace

RecordFilter negative_o_information() {
  return [](const search::MeasureReport& r) { return r.o_information < 0.0; };
}

ParticipationTable participation(std::span<const search::SampleRecord> records, std::size_t n_nodes,
                                 const RecordFilter& filter) {
  auto t = empty_table(n_nodes);
  for (const auto& r : records)
    if (filter(r.measures)) count_subset(t, r.subset());
  if (t.total_qualifying == 0)
    throw Error(ErrorCode::EmptyAfterFilter, "no record passes the filter (" + std::to_string(records.size()) +
                                                 " records examined)");
  return t;
}

ParticipationTable participation(std::span<const Subset> subsets, std::size_t n_nodes) {
  auto t = empty_table(n_nodes);
  for (const auto& s : subsets) count_subset(t, s);
  if (t.total_qualifying == 0) throw Error(ErrorCode::EmptyAfterFilter, "no subsets given");
  return t;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch,
                "inputs have lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  if (x.size() < 3) throw Error(ErrorCode::DegenerateInput, "need at least 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::DegenerateInput, "input is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch,
                "inputs have lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

ParticipationVsFc participation_vs_fc(const ParticipationTable& table, const CorrelationMatrix& cov,
                                      std::size_t max_rows, std::uint64_t seed) {
  if (table.n_nodes != cov.dim())
    throw Error(ErrorCode::ShapeMismatch, "participation table and matrix dimensions differ");
  const std::size_t n = table.n_nodes;
  std::vector<double> fc;
  std::vector<double> counts;
  std::vector<PairScatterRow> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      fc.push_back(std::abs(cov(i, j)));
      counts.push_back(static_cast<double>(table.pair(i, j)));
      rows.push_back({i, j, fc.back(), table.pair(i, j)});
    }
  ParticipationVsFc out;
  out.rho = spearman(fc, counts);
  out.pair_count = rows.size();
  if (rows.size() > max_rows) {
    Rng rng(seed);
    auto keep = rng.sample_without_replacement(rows.size(), max_rows);
    std::sort(keep.begin(), keep.end());
    for (std::size_t idx : keep) out.scatter.push_back(rows[idx]);
  } else {
    out.scatter = std::move(rows);
  }
  return out;
}

double jaccard(const Subset& a, const Subset& b) {
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

Eigen::MatrixXd jaccard_matrix(std::span<const Subset> subsets) {
  if (subsets.size() < 2) throw Error(ErrorCode::EmptyInput, "Jaccard matrix needs at least 2 subsets");
  const auto m = static_cast<Eigen::Index>(subsets.size());
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    out(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double v = jaccard(subsets[static_cast<std::size_t>(a)], subsets[static_cast<std::size_t>(b)]);
      out(a, b) = v;
      out(b, a) = v;
    }
  }
  return out;
}

SystemEnrichment system_enrichment(const ParticipationTable& table, const data::NodeLabels& labels) {
  if (labels.system_of.size() != table.n_nodes)
    throw Error(ErrorCode::LabelMismatch, "labels cover " + std::to_string(labels.system_of.size()) +
                                              " nodes, table has " + std::to_string(table.n_nodes));
  const std::uint64_t slots = std::accumulate(table.node_counts.begin(), table.node_counts.end(), std::uint64_t{0});
  if (slots == 0) throw Error(ErrorCode::EmptyAfterFilter, "participation table is empty");

  SystemEnrichment out;
  out.systems = labels.systems;
  out.sizes.assign(labels.system_count(), 0);
  std::vector<std::uint64_t> system_slots(labels.system_count(), 0);
  for (std::size_t node = 0; node < table.n_nodes; ++node) {
    ++out.sizes[labels.system_of[node]];
    system_slots[labels.system_of[node]] += table.node_counts[node];
  }
  // ratio = (slots_s / size_s) / (slots / N)
  const double n = static_cast<double>(table.n_nodes);
  for (std::size_t s = 0; s < out.systems.size(); ++s)
    out.ratio.push_back(static_cast<double>(system_slots[s]) * n /
                        (static_cast<double>(out.sizes[s]) * static_cast<double>(slots)));
  return out;
}

SystemEnrichment average_enrichment(std::span<const SystemEnrichment> per_size) {
  if (per_size.empty()) throw Error(ErrorCode::EmptyInput, "no enrichment tables to average");
  SystemEnrichment out = per_size.front();
  for (std::size_t t = 1; t < per_size.size(); ++t) {
    if (per_size[t].systems != out.systems)
      throw Error(ErrorCode::LabelMismatch, "enrichment tables list different systems");
    for (std::size_t s = 0; s < out.ratio.size(); ++s) out.ratio[s] += per_size[t].ratio[s];
  }
  for (double& r : out.ratio) r /= static_cast<double>(per_size.size());
  return out;
}

}  // namespace oinfo::analytics
