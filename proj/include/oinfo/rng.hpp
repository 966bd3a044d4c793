#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace oinfo {

// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for task `index` of stream `stream` under `master`. Depends only on
/// the triple, never on which worker picks the task up.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(splitmix64(stream) ^ (index + 0x632be59bd9b4e019ULL)));
}

/// Mersenne-twister with explicit draw routines. The standard distributions
/// are implementation-defined, so streams written through them would not be
/// portable between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound + 1) % bound;
    std::uint64_t x = engine_();
    while (x > limit) x = engine_();
    return x % bound;
  }

  // Standard normal via Box-Muller (one value per call).
  double normal();

  /// k distinct values from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  /// Index drawn from a discrete distribution given by non-negative weights.
  std::size_t discrete(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace oinfo
