#include "oinfo/combinatorics.hpp"

#include <limits>

namespace oinfo {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  const BigInt exact = binomial(n, k);
  if (exact > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return exact.convert_to<std::uint64_t>();
}

}  // namespace oinfo
