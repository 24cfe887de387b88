#pragma once

#include <cstddef>
#include <cstdint>

#include "f2f/bitvec.hpp"

namespace f2f {

// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9E3779B97F4A7C15, then
// the variant-13 finalizer. Fully specified, so seeds reproduce across
// platforms and languages.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t operator()() noexcept { return next(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

// Independent child seed for (seed, index); used to split streams per trial,
// per plane or per sweep cell.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

// Each bit Bernoulli(0.5): bits of successive 64-bit outputs, LSB first.
PackedBitVector gen_random_plane(std::size_t length, std::uint64_t seed);

// Each bit is 0 (pruned) with probability s, decided by uniform() < s.
PackedBitVector gen_bernoulli_mask(std::size_t length, double s, std::uint64_t seed);

struct SparsityProfile {
  double s = 0.0;  // observed pruning rate of the mask
  std::size_t blocks = 0;
  double mean = 0.0;
  double variance = 0.0;
  double coefficient_of_variation = 0.0;
};

// Moments of the per-block unpruned count over complete n_out blocks
// (a trailing partial block is excluded). Variance is the population variance.
SparsityProfile block_nu_stats(const PackedBitVector& mask, std::size_t n_out);

// Binomial B(n_out, 1-S) coefficient of variation: sqrt(S / (n_out (1-S))).
double block_nu_cv_theory(std::size_t n_out, double s);

// Row-length coefficient of variation of a CSR row with n_w weights:
// (1/sqrt(n_w)) * sqrt(S / (1-S)).
double csr_row_cv(std::size_t row_length, double s);

}  // namespace f2f
