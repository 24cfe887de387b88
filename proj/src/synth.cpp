#include "f2f/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "f2f/error.hpp"

namespace f2f {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  SplitMix64 outer(index);
  SplitMix64 inner(seed ^ outer.next());
  return inner.next();
}

PackedBitVector gen_random_plane(std::size_t length, std::uint64_t seed) {
  SplitMix64 rng(seed);
  PackedBitVector plane(length);
  for (std::size_t done = 0; done < length; done += 64) {
    const auto n = static_cast<unsigned>(std::min<std::size_t>(64, length - done));
    plane.deposit(done, n, rng.next());
  }
  return plane;
}

PackedBitVector gen_bernoulli_mask(std::size_t length, double s, std::uint64_t seed) {
  if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::invalid_parameter, "pruning rate must be in [0, 1)");
  SplitMix64 rng(seed);
  PackedBitVector mask(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (rng.uniform() >= s) mask.set(i, true);
  }
  return mask;
}

SparsityProfile block_nu_stats(const PackedBitVector& mask, std::size_t n_out) {
  if (n_out == 0) fail(ErrorKind::invalid_parameter, "n_out must be positive");
  SparsityProfile profile;
  if (!mask.empty()) {
    profile.s = 1.0 - static_cast<double>(mask.popcount()) / static_cast<double>(mask.size());
  }
  profile.blocks = mask.size() / n_out;
  if (profile.blocks == 0) return profile;

  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t b = 0; b < profile.blocks; ++b) {
    std::size_t n_u = 0;
    for (std::size_t done = 0; done < n_out; done += 64) {
      const auto n = static_cast<unsigned>(std::min<std::size_t>(64, n_out - done));
      n_u += static_cast<std::size_t>(std::popcount(mask.extract(b * n_out + done, n)));
    }
    const double x = static_cast<double>(n_u);
    const double delta = x - mean;
    mean += delta / static_cast<double>(b + 1);
    m2 += delta * (x - mean);
  }
  profile.mean = mean;
  profile.variance = m2 / static_cast<double>(profile.blocks);
  profile.coefficient_of_variation = mean > 0.0 ? std::sqrt(profile.variance) / mean : 0.0;
  return profile;
}

double block_nu_cv_theory(std::size_t n_out, double s) {
  if (n_out == 0 || !(s >= 0.0 && s < 1.0)) {
    fail(ErrorKind::invalid_parameter, "need n_out >= 1 and 0 <= S < 1");
  }
  return std::sqrt(s / (static_cast<double>(n_out) * (1.0 - s)));
}

double csr_row_cv(std::size_t row_length, double s) {
  if (row_length == 0) fail(ErrorKind::invalid_parameter, "row length must be positive");
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::invalid_parameter, "csr_row_cv needs 0 < S < 1");
  return (1.0 / std::sqrt(static_cast<double>(row_length))) * std::sqrt(s / (1.0 - s));
}

}  // namespace f2f
