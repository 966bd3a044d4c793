#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oinfo {

/// Strictly increasing, non-empty list of node indices.
class Subset {
 public:
  /// Sorts `indices`; throws IndexOverlap on duplicates, EmptyInput if empty.
  explicit Subset(std::vector<std::size_t> indices);
  Subset(std::initializer_list<std::size_t> indices)
      : Subset(std::vector<std::size_t>(indices)) {}

  /// The full set {0, ..., n-1}.
  static Subset range(std::size_t n);
  /// Parses "0,1,2" or "0-4" style lists (ranges inclusive).
  static Subset parse(std::string_view text);

  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t operator[](std::size_t pos) const { return indices_[pos]; }
  std::span<const std::size_t> indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool contains(std::size_t node) const noexcept;

  /// Subset with the element at position `pos` removed (X^{-i}).
  Subset without_position(std::size_t pos) const;
  /// Elements at the given positions of this subset.
  Subset pick(std::span<const std::size_t> positions) const;
  /// Elements not at the given (sorted) positions.
  Subset complement_of_positions(std::span<const std::size_t> positions) const;

  /// Throws IndexOutOfRange naming the first offending index.
  void check_bounds(std::size_t parent_dim) const;

  std::string to_string() const;

  friend bool operator==(const Subset&, const Subset&) = default;
  friend auto operator<=>(const Subset& a, const Subset& b) { return a.indices_ <=> b.indices_; }

 private:
  struct Trusted {};
  Subset(Trusted, std::vector<std::size_t> sorted) : indices_(std::move(sorted)) {}

  std::vector<std::size_t> indices_;
};

}  // namespace oinfo
