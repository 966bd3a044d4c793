#include "oinfo/subset.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "oinfo/error.hpp"

namespace oinfo {

Subset::Subset(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw Error(ErrorCode::EmptyInput, "subset must contain at least one index");
  std::sort(indices_.begin(), indices_.end());
  auto dup = std::adjacent_find(indices_.begin(), indices_.end());
  if (dup != indices_.end())
    throw Error(ErrorCode::IndexOverlap, "index " + std::to_string(*dup) + " repeated in subset");
}

Subset Subset::range(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return Subset(std::move(v));
}

namespace {

std::size_t parse_index(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw Error(ErrorCode::InvalidConfig, "bad subset index '" + std::string(token) + "'");
  return value;
}

}  // namespace

Subset Subset::parse(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(start, comma - start);
    if (auto dash = token.find('-'); dash != std::string_view::npos) {
      const std::size_t lo = parse_index(token.substr(0, dash));
      const std::size_t hi = parse_index(token.substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::InvalidConfig, "descending range '" + std::string(token) + "'");
      for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
    } else {
      out.push_back(parse_index(token));
    }
    start = comma + 1;
  }
  return Subset(std::move(out));
}

bool Subset::contains(std::size_t node) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), node);
}

Subset Subset::without_position(std::size_t pos) const {
  if (indices_.size() < 2) throw Error(ErrorCode::SubsetTooSmall, "cannot remove from a singleton");
  std::vector<std::size_t> v;
  v.reserve(indices_.size() - 1);
  for (std::size_t i = 0; i < indices_.size(); ++i)
    if (i != pos) v.push_back(indices_[i]);
  return Subset(Trusted{}, std::move(v));
}

Subset Subset::pick(std::span<const std::size_t> positions) const {
  std::vector<std::size_t> v;
  v.reserve(positions.size());
  for (std::size_t p : positions) v.push_back(indices_.at(p));
  return Subset(std::move(v));
}

Subset Subset::complement_of_positions(std::span<const std::size_t> positions) const {
  std::vector<std::size_t> v;
  v.reserve(indices_.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (next < positions.size() && positions[next] == i) {
      ++next;
      continue;
    }
    v.push_back(indices_[i]);
  }
  return Subset(std::move(v));
}

void Subset::check_bounds(std::size_t parent_dim) const {
  for (std::size_t i : indices_)
    if (i >= parent_dim)
      throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(i) +
                                                  " out of range for dimension " + std::to_string(parent_dim));
}

std::string Subset::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(indices_[i]);
  }
  return s;
}

}  // namespace oinfo
