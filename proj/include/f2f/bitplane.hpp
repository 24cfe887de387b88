#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "f2f/bitvec.hpp"

namespace f2f {

struct TensorManifest {
  std::vector<std::size_t> shape;
  unsigned bit_width = 8;

  std::size_t element_count() const;
  // Bytes per stored element in a raw dump: ceil(bit_width / 8).
  std::size_t element_bytes() const { return (bit_width + 7) / 8; }
  // Throws malformed_input on an empty/zero shape or bit_width outside 1..64.
  void validate() const;
};

// n_w planes sharing one pruning mask. Plane 0 holds the most significant
// bit of every weight (flattened row-major).
struct BitPlaneSet {
  std::vector<PackedBitVector> planes;
  PackedBitVector mask;
  std::vector<bool> inverted;

  std::size_t length() const { return mask.size(); }
};

// N_out data bits with their mask (1 = unpruned); the unit of encoding.
struct MaskedBlock {
  PackedBitVector data;
  PackedBitVector mask;
  std::size_t n_u = 0;

  MaskedBlock() = default;
  MaskedBlock(PackedBitVector data_bits, PackedBitVector mask_bits);
};

BitPlaneSet group_bitplanes(std::span<const std::uint8_t> raw_weights,
                            const TensorManifest& manifest,
                            const PackedBitVector& mask);

// Inverse of group_bitplanes. Inversion flags are *not* undone here; callers
// restore inverted planes first.
std::vector<std::uint8_t> ungroup_bitplanes(std::span<const PackedBitVector> planes,
                                            const TensorManifest& manifest);

// ceil(length / n_out) blocks; the tail block is zero-padded with mask 0.
std::vector<MaskedBlock> slice_blocks(const PackedBitVector& plane,
                                      const PackedBitVector& mask, std::size_t n_out);

double zero_ratio(const PackedBitVector& plane, const PackedBitVector& mask);

// Flips the plane when fewer than half of its unpruned bits are zero.
std::pair<PackedBitVector, bool> maybe_invert(const PackedBitVector& plane,
                                              const PackedBitVector& mask);

}  // namespace f2f
