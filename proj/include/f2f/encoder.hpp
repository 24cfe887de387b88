#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "f2f/bitplane.hpp"
#include "f2f/gf2decoder.hpp"

namespace f2f {

struct EncoderOptions {
  unsigned trellis_cap = kDefaultTrellisCap;
};

struct EncodeResult {
  // l + n_s vectors; the first n_s are the zero warm-up.
  InputStream stream;
  std::uint64_t total_errors = 0;
  std::vector<std::uint32_t> per_block_errors;
};

// Unpruned positions where candidate and block data disagree.
std::uint32_t err_num(const PackedBitVector& candidate, const MaskedBlock& block);

// n_s = 0 only: every block picks the input minimizing its own error count,
// smallest input on ties.
EncodeResult encode_nonsequential(const DecoderSpec& spec, std::span<const MaskedBlock> blocks);

// Exact minimum-error stream for any n_s via a trellis over the last n_s
// input vectors. Among optimal streams the lexicographically smallest one
// (compared from u_{n_s+1} onward) is returned.
EncodeResult encode_sequential_dp(const DecoderSpec& spec, std::span<const MaskedBlock> blocks,
                                  const EncoderOptions& options = {});

EncodeResult encode_plane(const DecoderSpec& spec, const PackedBitVector& plane,
                          const PackedBitVector& mask, const EncoderOptions& options = {});

}  // namespace f2f
