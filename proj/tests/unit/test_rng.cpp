#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "satact/rng.hpp"

// Reference outputs were produced by an independent Python transcription of
// SplitMix64 seeding, xoshiro256** and the Box-Muller pairing.

TEST(Rng, XoshiroStreamFromSeedZero) {
  satact::Rng rng(0);
  EXPECT_EQ(rng.next(), 0x99ec5f36cb75f2b4ULL);
  EXPECT_EQ(rng.next(), 0xbf6e1f784956452aULL);
  EXPECT_EQ(rng.next(), 0x1a5f849d4933e6e0ULL);
}

TEST(Rng, UniformFrozenValues) {
  satact::Rng rng(42);
  EXPECT_EQ(rng.uniform(), 0.08386297105988216);
  EXPECT_EQ(rng.uniform(), 0.3789802506626686);
  EXPECT_EQ(rng.uniform(), 0.6800434110281394);
}

TEST(Rng, NormalFrozenValuesCosineFirst) {
  satact::Rng rng(7);
  EXPECT_DOUBLE_EQ(rng.normal(), -0.2790239910251981);
  EXPECT_DOUBLE_EQ(rng.normal(), 1.5277231859624536);
  EXPECT_DOUBLE_EQ(rng.normal(), 1.8997685786889567);
  EXPECT_DOUBLE_EQ(rng.normal(), -0.2266957459968598);
}

TEST(Rng, MixSeedFrozenValues) {
  EXPECT_EQ(satact::mix_seed(42, 1), 0xc8ddbbbeab9cba1bULL);
  EXPECT_EQ(satact::mix_seed(42, 2), 0xfa797f03f3c87f80ULL);
  EXPECT_EQ(satact::mix_seed(0, 0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, SameSeedSameStream) {
  satact::Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
  EXPECT_EQ(a.seed(), 123u);
}

TEST(Rng, UniformStaysInHalfOpenUnitInterval) {
  satact::Rng rng(5);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
  satact::Rng rng(6);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, draws / 7, 400);
  EXPECT_EQ(rng.below(1), 0u);
  EXPECT_EQ(rng.below(0), 0u);
}

TEST(Rng, ShuffleIsAPermutationAndDeterministic) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  satact::Rng ra(8), rb(8);
  ra.shuffle(std::span<int>(a));
  rb.shuffle(std::span<int>(b));
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(50);
  std::iota(expect.begin(), expect.end(), 0);
  EXPECT_EQ(sorted, expect);
  EXPECT_NE(a, expect);
}

TEST(Rng, MixSeedSeparatesStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t t = 0; t < 256; ++t) seen.insert(satact::mix_seed(s, t));
  EXPECT_EQ(seen.size(), 4u * 256u);
}

TEST(Rng, NormalMoments) {
  satact::Rng rng(9);
  std::vector<double> xs(200000);
  for (double& x : xs) x = rng.normal();
  EXPECT_NEAR(oracle::mean_of(xs), 0.0, 0.01);
  EXPECT_NEAR(oracle::two_pass_variance(xs), 1.0, 0.015);
}
