#include "f2f/bitplane.hpp"

#include <string>

#include "f2f/error.hpp"

namespace f2f {

std::size_t TensorManifest::element_count() const {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

void TensorManifest::validate() const {
  if (shape.empty()) fail(ErrorKind::malformed_input, "manifest shape is empty");
  for (std::size_t d : shape) {
    if (d == 0) fail(ErrorKind::malformed_input, "manifest shape has a zero dimension");
  }
  if (bit_width < 1 || bit_width > 64) {
    fail(ErrorKind::malformed_input, "bit_width must be in 1..64, got " + std::to_string(bit_width));
  }
}

MaskedBlock::MaskedBlock(PackedBitVector data_bits, PackedBitVector mask_bits)
    : data(std::move(data_bits)), mask(std::move(mask_bits)), n_u(mask.popcount()) {
  if (data.size() != mask.size()) {
    fail(ErrorKind::invalid_parameter, "block data and mask widths differ");
  }
}

BitPlaneSet group_bitplanes(std::span<const std::uint8_t> raw_weights,
                            const TensorManifest& manifest, const PackedBitVector& mask) {
  manifest.validate();
  const std::size_t count = manifest.element_count();
  const std::size_t stride = manifest.element_bytes();
  if (raw_weights.size() != count * stride) {
    fail(ErrorKind::malformed_input,
         "weight buffer has " + std::to_string(raw_weights.size()) + " bytes, manifest expects " +
             std::to_string(count * stride));
  }
  if (mask.size() != count) {
    fail(ErrorKind::malformed_input, "mask length " + std::to_string(mask.size()) +
                                         " != element count " + std::to_string(count));
  }

  const unsigned width = manifest.bit_width;
  BitPlaneSet set;
  set.planes.assign(width, PackedBitVector(count));
  set.mask = mask;
  set.inverted.assign(width, false);

  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t value = 0;
    for (std::size_t b = 0; b < stride; ++b) {
      value |= std::uint64_t{raw_weights[i * stride + b]} << (8 * b);
    }
    if (width < 64 && (value >> width) != 0) {
      fail(ErrorKind::malformed_input,
           "element " + std::to_string(i) + " has bits set above bit_width");
    }
    for (unsigned k = 0; k < width; ++k) {
      if ((value >> (width - 1 - k)) & 1U) set.planes[k].set(i, true);
    }
  }
  return set;
}

std::vector<std::uint8_t> ungroup_bitplanes(std::span<const PackedBitVector> planes,
                                            const TensorManifest& manifest) {
  manifest.validate();
  const std::size_t count = manifest.element_count();
  const std::size_t stride = manifest.element_bytes();
  const unsigned width = manifest.bit_width;
  if (planes.size() != width) {
    fail(ErrorKind::malformed_input, "plane count does not match bit_width");
  }
  for (const auto& p : planes) {
    if (p.size() != count) fail(ErrorKind::malformed_input, "plane length mismatch");
  }

  std::vector<std::uint8_t> raw(count * stride, 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t value = 0;
    for (unsigned k = 0; k < width; ++k) {
      if (planes[k].get(i)) value |= std::uint64_t{1} << (width - 1 - k);
    }
    for (std::size_t b = 0; b < stride; ++b) {
      raw[i * stride + b] = static_cast<std::uint8_t>(value >> (8 * b));
    }
  }
  return raw;
}

std::vector<MaskedBlock> slice_blocks(const PackedBitVector& plane, const PackedBitVector& mask,
                                      std::size_t n_out) {
  if (n_out == 0) fail(ErrorKind::invalid_parameter, "n_out must be positive");
  if (plane.size() != mask.size()) {
    fail(ErrorKind::invalid_parameter, "plane and mask lengths differ");
  }
  const std::size_t l = (plane.size() + n_out - 1) / n_out;
  std::vector<MaskedBlock> blocks;
  blocks.reserve(l);
  for (std::size_t b = 0; b < l; ++b) {
    // slice() zero-fills past the end, which gives the tail its masked pads.
    blocks.emplace_back(plane.slice(b * n_out, n_out), mask.slice(b * n_out, n_out));
  }
  return blocks;
}

double zero_ratio(const PackedBitVector& plane, const PackedBitVector& mask) {
  if (plane.size() != mask.size()) {
    fail(ErrorKind::invalid_parameter, "plane and mask lengths differ");
  }
  const std::size_t live = mask.popcount();
  if (live == 0) fail(ErrorKind::undefined_ratio, "zero ratio undefined without unpruned bits");
  const std::size_t ones = (plane & mask).popcount();
  return static_cast<double>(live - ones) / static_cast<double>(live);
}

std::pair<PackedBitVector, bool> maybe_invert(const PackedBitVector& plane,
                                              const PackedBitVector& mask) {
  zero_ratio(plane, mask);  // validates lengths and unpruned count
  const std::size_t live = mask.popcount();
  const std::size_t zeros = live - (plane & mask).popcount();
  if (2 * zeros < live) return {plane.flipped(), true};
  return {plane, false};
}

}  // namespace f2f
