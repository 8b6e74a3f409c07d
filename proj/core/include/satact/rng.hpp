#pragma once

#include <cstdint>
#include <cstddef>
#include <span>
#include <utility>

namespace satact {

// Deterministic pseudo-random source, identical on every platform.
//
// Core generator: xoshiro256** (Blackman & Vigna), state seeded by four
// successive SplitMix64 outputs of the 64-bit seed. Derived distributions are
// implemented here rather than via <random> distributions, whose output is
// implementation-defined:
//   uniform()       top 53 bits of next() scaled to [0, 1)
//   normal()        Box-Muller on (1 - uniform(), uniform()); both variates of
//                   each pair are used, cosine branch first
//   below(n)        next() % n after rejecting the low 2^64 mod n values
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() noexcept;
  double uniform() noexcept;
  double normal() noexcept;
  std::uint64_t below(std::uint64_t n) noexcept;

  // Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; used to derive independent per-trial streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace satact
