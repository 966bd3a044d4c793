#include "oinfo/discrete_info.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "oinfo/csv.hpp"
#include "oinfo/error.hpp"

namespace oinfo::discrete {

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> strides(sizes.size(), 1);
  for (std::size_t v = sizes.size(); v-- > 1;) strides[v - 1] = strides[v] * sizes[v];
  return strides;
}

std::size_t cell_count(const std::vector<std::size_t>& sizes) {
  std::size_t cells = 1;
  for (std::size_t s : sizes) {
    if (s == 0) throw Error(ErrorCode::InvalidDistribution, "alphabet size must be positive");
    if (cells > DiscreteJoint::kMaxCells / s)
      throw Error(ErrorCode::InvalidDistribution, "joint table exceeds 2^20 cells");
    cells *= s;
  }
  return cells;
}

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double q : p)
    if (q > 0.0) h -= q * std::log2(q);
  return h;
}

void require_arity(const DiscreteJoint& joint, std::size_t min_n, const char* what) {
  if (joint.arity() < min_n)
    throw Error(ErrorCode::SubsetTooSmall, std::string(what) + " needs at least " + std::to_string(min_n) +
                                               " variables, got " + std::to_string(joint.arity()));
}

double sum_single_entropies(const DiscreteJoint& joint) {
  double s = 0.0;
  for (std::size_t v = 0; v < joint.arity(); ++v) s += entropy(joint, Subset{v});
  return s;
}

double sum_deletion_entropies(const DiscreteJoint& joint) {
  const Subset all = Subset::range(joint.arity());
  double s = 0.0;
  for (std::size_t v = 0; v < joint.arity(); ++v) s += entropy(joint, all.without_position(v));
  return s;
}

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<std::size_t> alphabet_sizes, std::vector<double> probabilities)
    : alphabet_sizes_(std::move(alphabet_sizes)), probabilities_(std::move(probabilities)) {
  if (alphabet_sizes_.empty()) throw Error(ErrorCode::InvalidDistribution, "joint needs at least one variable");
  if (cell_count(alphabet_sizes_) != probabilities_.size())
    throw Error(ErrorCode::InvalidDistribution, "table size does not match alphabet sizes");
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error(ErrorCode::InvalidDistribution, "probabilities must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidDistribution, "probabilities sum to " + csv::format_double(total));
}

DiscreteJoint DiscreteJoint::load_csv(const std::filesystem::path& path, char delimiter) {
  const auto table = csv::read(path, {.delimiter = delimiter});
  if (table.rows.empty()) throw Error(ErrorCode::EmptyInput, "no outcome rows in '" + path.string() + "'");
  const std::size_t width = table.rows.front().size();
  if (width < 2) throw Error(ErrorCode::ParseError, "rows need at least one outcome column and a probability");
  std::vector<std::vector<std::size_t>> outcomes;
  std::vector<double> masses;
  std::vector<std::size_t> sizes(width - 1, 1);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    if (row.size() != width)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + " has " + std::to_string(row.size()) +
                                             " fields, expected " + std::to_string(width));
    std::vector<std::size_t> outcome;
    for (std::size_t c = 0; c + 1 < width; ++c) {
      const double x = csv::parse_double(row[c], line, c + 1);
      if (x < 0.0 || x != std::floor(x))
        throw Error(ErrorCode::ParseError, "outcome symbol at line " + std::to_string(line) + ", column " +
                                               std::to_string(c + 1) + " is not a non-negative integer");
      outcome.push_back(static_cast<std::size_t>(x));
      sizes[c] = std::max(sizes[c], outcome.back() + 1);
    }
    outcomes.push_back(std::move(outcome));
    masses.push_back(csv::parse_double(row.back(), line, width));
  }
  std::vector<double> table_p(cell_count(sizes), 0.0);
  const auto strides = strides_of(sizes);
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    std::size_t flat = 0;
    for (std::size_t v = 0; v < sizes.size(); ++v) flat += outcomes[r][v] * strides[v];
    table_p[flat] += masses[r];
  }
  return DiscreteJoint(std::move(sizes), std::move(table_p));
}

double DiscreteJoint::probability(std::span<const std::size_t> outcome) const {
  if (outcome.size() != arity()) throw Error(ErrorCode::ShapeMismatch, "outcome arity mismatch");
  const auto strides = strides_of(alphabet_sizes_);
  std::size_t flat = 0;
  for (std::size_t v = 0; v < arity(); ++v) {
    if (outcome[v] >= alphabet_sizes_[v]) return 0.0;
    flat += outcome[v] * strides[v];
  }
  return probabilities_[flat];
}

DiscreteJoint DiscreteJoint::marginalize(const Subset& vars) const {
  vars.check_bounds(arity());
  std::vector<std::size_t> out_sizes;
  for (std::size_t v : vars) out_sizes.push_back(alphabet_sizes_[v]);
  const auto out_strides = strides_of(out_sizes);
  const auto in_strides = strides_of(alphabet_sizes_);
  std::vector<double> out(cell_count(out_sizes), 0.0);
  for (std::size_t flat = 0; flat < probabilities_.size(); ++flat) {
    const double p = probabilities_[flat];
    if (p == 0.0) continue;
    std::size_t target = 0;
    for (std::size_t a = 0; a < vars.size(); ++a) {
      const std::size_t v = vars[a];
      target += (flat / in_strides[v]) % alphabet_sizes_[v] * out_strides[a];
    }
    out[target] += p;
  }
  return DiscreteJoint(Trusted{}, std::move(out_sizes), std::move(out));
}

double entropy(const DiscreteJoint& joint, const Subset& vars) {
  return entropy_bits(joint.marginalize(vars).probabilities());
}

double entropy(const DiscreteJoint& joint) { return entropy_bits(joint.probabilities()); }

double total_correlation(const DiscreteJoint& joint) {
  require_arity(joint, 2, "total correlation");
  return sum_single_entropies(joint) - entropy(joint);
}

double dual_total_correlation(const DiscreteJoint& joint) {
  require_arity(joint, 2, "dual total correlation");
  const double n = static_cast<double>(joint.arity());
  return (1.0 - n) * entropy(joint) + sum_deletion_entropies(joint);
}

double o_information(const DiscreteJoint& joint) {
  require_arity(joint, 3, "O-information");
  return total_correlation(joint) - dual_total_correlation(joint);
}

double normalized_o_information(const DiscreteJoint& joint) {
  return o_information(joint) / static_cast<double>(joint.arity());
}

double description_complexity(const DiscreteJoint& joint) {
  require_arity(joint, 2, "description complexity");
  const std::size_t n = joint.arity();
  const double tc = total_correlation(joint);
  double mean_minus = 0.0;
  if (n > 2) {
    for (std::size_t v = 0; v < n; ++v)
      mean_minus += total_correlation(joint.marginalize(Subset::range(n).without_position(v)));
  }
  mean_minus /= static_cast<double>(n);
  return tc - tc / static_cast<double>(n) - mean_minus;
}

double mutual_information(const DiscreteJoint& joint, std::size_t i, std::size_t j) {
  return conditional_mutual_information(joint, i, j, {});
}

double conditional_mutual_information(const DiscreteJoint& joint, std::size_t i, std::size_t j,
                                      std::span<const std::size_t> given) {
  if (i == j) throw Error(ErrorCode::IndexOverlap, "conditional MI needs two distinct variables");
  for (std::size_t g : given)
    if (g == i || g == j)
      throw Error(ErrorCode::IndexOverlap, "variable " + std::to_string(g) + " appears in the conditioning set");
  auto with = [&](std::initializer_list<std::size_t> extra) {
    std::vector<std::size_t> v(given.begin(), given.end());
    v.insert(v.end(), extra);
    return Subset(std::move(v));
  };
  const double h_given = given.empty() ? 0.0 : entropy(joint, Subset(std::vector<std::size_t>(given.begin(), given.end())));
  return entropy(joint, with({i})) + entropy(joint, with({j})) - h_given - entropy(joint, with({i, j}));
}

DiscreteJoint xor_joint() {
  std::vector<double> p(8, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2) p[x1 * 4 + x2 * 2 + (x1 ^ x2)] = 0.25;
  return DiscreteJoint({2, 2, 2}, std::move(p));
}

}  // namespace oinfo::discrete
