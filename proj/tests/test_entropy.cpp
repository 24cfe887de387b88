#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "f2f/entropy.hpp"
#include "f2f/error.hpp"

using namespace f2f;

namespace {

void expect_cover_and_assignment(const SymbolTable& t) {
  const auto blocks = enumerate_masked_blocks(t.n_b, t.n_u);
  for (const auto& b : blocks) {
    bool covered = false;
    for (auto s : t.symbols) covered = covered || compatible(s, b);
    EXPECT_TRUE(covered) << "mask " << b.mask << " data " << b.data;
  }
  EXPECT_EQ(std::accumulate(t.counts.begin(), t.counts.end(), std::size_t{0}), blocks.size());
  EXPECT_NEAR(std::accumulate(t.probabilities.begin(), t.probabilities.end(), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(t.entropy_bits, entropy_of_counts(t.counts), 1e-12);
  EXPECT_LE(t.entropy_bits, std::log2(double(t.symbols.size())) + 1e-12);
}

}  // namespace

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_masked_blocks(4, 2).size(), 24u);
  EXPECT_EQ(enumerate_masked_blocks(4, 0).size(), 1u);
  EXPECT_EQ(enumerate_masked_blocks(4, 4).size(), 16u);
  EXPECT_EQ(enumerate_masked_blocks(8, 3).size(), 56u * 8u);
}

TEST(Enumerate, DistinctAndWellFormed) {
  const auto blocks = enumerate_masked_blocks(6, 3);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& b : blocks) {
    EXPECT_EQ(std::popcount(b.mask), 3);
    EXPECT_EQ(b.data & ~b.mask, 0u);
    EXPECT_LT(b.mask, 64u);
    seen.insert({b.mask, b.data});
  }
  EXPECT_EQ(seen.size(), blocks.size());
}

TEST(Enumerate, OutOfRange) {
  EXPECT_THROW(enumerate_masked_blocks(9, 1), Error);
  EXPECT_THROW(enumerate_masked_blocks(4, 5), Error);
}

TEST(MinSymbolSet, OneUnprunedOfFour) {
  const auto t = min_symbol_set(4, 1);
  EXPECT_EQ(t.symbols.size(), 2u);
  EXPECT_EQ(t.entropy_bits, 1.0);
  EXPECT_EQ(fixed_to_fixed_bits(t), 1u);
  expect_cover_and_assignment(t);
}

TEST(MinSymbolSet, TwoUnprunedOfFour) {
  const auto t = min_symbol_set(4, 2);
  EXPECT_EQ(t.symbols.size(), 5u);
  EXPECT_NEAR(t.entropy_bits, 2.28, 0.01);
  EXPECT_NEAR(t.entropy_bits, 2.2772925846688996, 1e-12);
  EXPECT_EQ(fixed_to_fixed_bits(t), 3u);
  EXPECT_TRUE(t.cover_exact);
  EXPECT_TRUE(t.assignment_exact);
  expect_cover_and_assignment(t);
}

TEST(MinSymbolSet, ThreeUnprunedOfFour) {
  const auto t = min_symbol_set(4, 3);
  EXPECT_EQ(t.symbols.size(), 8u);
  EXPECT_EQ(fixed_to_fixed_bits(t), 3u);
  expect_cover_and_assignment(t);
}

TEST(MinSymbolSet, FullyUnprunedNeedsEverySymbol) {
  for (unsigned n_b = 1; n_b <= 5; ++n_b) {
    const auto t = min_symbol_set(n_b, n_b);
    EXPECT_EQ(t.symbols.size(), std::size_t{1} << n_b);
    EXPECT_NEAR(t.entropy_bits, double(n_b), 1e-12);
  }
}

TEST(MinSymbolSet, NothingUnprunedNeedsOneSymbol) {
  const auto t = min_symbol_set(4, 0);
  EXPECT_EQ(t.symbols.size(), 1u);
  EXPECT_EQ(t.entropy_bits, 0.0);
  EXPECT_EQ(fixed_to_fixed_bits(t), 0u);
}

TEST(MinSymbolSet, EntropyNotBelowUnprunedCount) {
  for (unsigned n_u = 0; n_u <= 4; ++n_u) {
    EXPECT_GE(min_symbol_set(4, n_u).entropy_bits + 1e-12, double(n_u));
  }
}

TEST(MinSymbolSet, LargerBlocksStillCover) {
  const auto t = min_symbol_set(6, 2);
  expect_cover_and_assignment(t);
}

TEST(EntropyOfCounts, Basics) {
  EXPECT_EQ(entropy_of_counts({5}), 0.0);
  EXPECT_DOUBLE_EQ(entropy_of_counts({1, 1, 1, 1}), 2.0);
  EXPECT_DOUBLE_EQ(entropy_of_counts({3, 0, 3}), 1.0);
}

TEST(FixedToFixed, Bits) {
  SymbolTable t;
  t.symbols = {0, 1, 2, 3, 4};
  EXPECT_EQ(fixed_to_fixed_bits(t), 3u);
  t.symbols = {0, 1};
  EXPECT_EQ(fixed_to_fixed_bits(t), 1u);
  t.symbols = {0};
  EXPECT_EQ(fixed_to_fixed_bits(t), 0u);
}
