#pragma once

#include <cstdint>
#include <vector>

#include "f2f/bitplane.hpp"
#include "f2f/gf2decoder.hpp"
#include "f2f/matrixsearch.hpp"
#include "f2f/synth.hpp"

namespace f2f::testing {

inline PackedBitVector bits(const char* s) { return PackedBitVector::from_string(s); }

inline PackedBitVector random_bits(std::size_t n, SplitMix64& rng) {
  PackedBitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng.next() & 1U);
  return v;
}

inline DecoderSpec random_spec(unsigned n_in, unsigned n_out, unsigned n_s, SplitMix64& rng) {
  return sample_matrix(n_in, n_out, n_s, rng, 0.5, kMaxWindowBits);
}

inline DecoderSpec spec_from_rows(unsigned n_in, unsigned n_s, std::vector<const char*> rows) {
  std::vector<PackedBitVector> r;
  for (const char* s : rows) r.push_back(PackedBitVector::from_string(s));
  const auto n_out = static_cast<unsigned>(r.size());
  return DecoderSpec(n_in, n_out, n_s, std::move(r));
}

inline std::vector<MaskedBlock> random_blocks(std::size_t l, unsigned n_out, SplitMix64& rng,
                                              double keep = 0.5) {
  std::vector<MaskedBlock> blocks;
  for (std::size_t b = 0; b < l; ++b) {
    PackedBitVector mask(n_out);
    for (unsigned i = 0; i < n_out; ++i) mask.set(i, rng.uniform() < keep);
    blocks.emplace_back(random_bits(n_out, rng), mask);
  }
  return blocks;
}

}  // namespace f2f::testing
