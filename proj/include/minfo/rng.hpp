#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace minfo {

// splitmix64 finalizer; also used to expand seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Pure per-task seed: hash of (base seed, tag, index).
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) noexcept;

// xoshiro256** with splitmix64 seeding. Always passed explicitly; never global.
// Not thread-safe: one Rng per thread/task.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  // Uniform on [lo, hi).
  double uniform(double lo = 0.0, double hi = 1.0) noexcept;
  double normal() noexcept;

  // Independent generator for a named sub-stream.
  Rng fork(std::string_view tag) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace minfo
