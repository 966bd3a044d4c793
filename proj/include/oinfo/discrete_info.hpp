#pragma once

// Plug-in information measures on small dense joint distributions. Values
// are in bits. These serve as exact oracles for the measure definitions.

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "oinfo/subset.hpp"

namespace oinfo::discrete {

/// Dense probability table over N finite-alphabet variables. Outcomes are
/// stored row-major with the last variable varying fastest.
class DiscreteJoint {
 public:
  static constexpr std::size_t kMaxCells = std::size_t{1} << 20;

  /// Throws InvalidDistribution on negative mass, mass not summing to 1
  /// (within 1e-12), a table/alphabet size mismatch, or an oversized table.
  DiscreteJoint(std::vector<std::size_t> alphabet_sizes, std::vector<double> probabilities);

  /// Rows of `x_1, ..., x_N, p`. Alphabet sizes are max(x_v) + 1; missing
  /// outcomes have mass 0; repeated outcomes accumulate.
  static DiscreteJoint load_csv(const std::filesystem::path& path, char delimiter = ',');

  std::size_t arity() const noexcept { return alphabet_sizes_.size(); }
  const std::vector<std::size_t>& alphabet_sizes() const noexcept { return alphabet_sizes_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }

  double probability(std::span<const std::size_t> outcome) const;

  /// Joint over `vars` only, in the subset's (sorted) order.
  DiscreteJoint marginalize(const Subset& vars) const;

 private:
  struct Trusted {};
  DiscreteJoint(Trusted, std::vector<std::size_t> sizes, std::vector<double> p)
      : alphabet_sizes_(std::move(sizes)), probabilities_(std::move(p)) {}

  std::vector<std::size_t> alphabet_sizes_;
  std::vector<double> probabilities_;
};

double entropy(const DiscreteJoint& joint, const Subset& vars);
double entropy(const DiscreteJoint& joint);

double total_correlation(const DiscreteJoint& joint);
double dual_total_correlation(const DiscreteJoint& joint);
double o_information(const DiscreteJoint& joint);
double normalized_o_information(const DiscreteJoint& joint);
double description_complexity(const DiscreteJoint& joint);

double mutual_information(const DiscreteJoint& joint, std::size_t i, std::size_t j);

/// I(X_i; X_j | X_given). An empty `given` gives the plain mutual information.
double conditional_mutual_information(const DiscreteJoint& joint, std::size_t i, std::size_t j,
                                      std::span<const std::size_t> given);

/// Y = X1 xor X2 with X1, X2 fair independent coins: mass 1/4 on
/// 000, 011, 101, 110.
DiscreteJoint xor_joint();

}  // namespace oinfo::discrete
