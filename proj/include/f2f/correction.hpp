#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "f2f/bitvec.hpp"

namespace f2f {

struct CorrectionConfig {
  std::uint32_t p = 512;  // correction window length in bits, a power of two

  void validate() const;
  unsigned position_bits() const;               // log2(p)
  unsigned n_c() const { return position_bits() + 1; }  // bits per recorded error
};

// Flip list for one plane. One flag per p-bit window; each flagged window
// carries its mismatch offsets (ascending, < p). On the wire every offset is
// preceded by a '1' marker and the window's list ends with a '0' marker.
struct CorrectionStream {
  PackedBitVector flags;
  std::vector<std::vector<std::uint32_t>> positions;  // one list per flagged window

  std::size_t mismatches() const;

  friend bool operator==(const CorrectionStream&, const CorrectionStream&) = default;
};

CorrectionStream build_correction(const PackedBitVector& decoded, const PackedBitVector& original,
                                  const PackedBitVector& mask, const CorrectionConfig& cfg);

// Flips every recorded position. Inconsistent streams raise corrupt_artifact.
PackedBitVector apply_correction(PackedBitVector decoded, const CorrectionStream& stream,
                                 const CorrectionConfig& cfg);

// Serialized size: flags + per error (1 + log2 p) + one terminator per flagged window.
std::uint64_t correction_bits(const CorrectionStream& stream, const CorrectionConfig& cfg);

void write_correction(BitWriter& out, const CorrectionStream& stream, const CorrectionConfig& cfg);
CorrectionStream read_correction(BitReader& in, std::size_t plane_length,
                                 const CorrectionConfig& cfg);

}  // namespace f2f
