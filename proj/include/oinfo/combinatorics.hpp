#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace oinfo {

using BigInt = boost::multiprecision::cpp_int;

/// Exact C(n, k).
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k) clamped to UINT64_MAX on overflow.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

/// Calls fn(span of r positions) for every r-combination of [0, n) in
/// lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<std::size_t> c(r);
  std::iota(c.begin(), c.end(), std::size_t{0});
  while (true) {
    fn(std::span<const std::size_t>(c));
    if (r == 0) return;
    std::size_t i = r;
    while (i > 0 && c[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < r; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace oinfo
