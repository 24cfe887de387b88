#include "f2f/gf2decoder.hpp"

#include <algorithm>
#include <string>

#include "f2f/error.hpp"

namespace f2f {

DecoderSpec::DecoderSpec(unsigned n_in, unsigned n_out, unsigned n_s,
                         std::vector<PackedBitVector> rows, unsigned trellis_cap)
    : n_in_(n_in), n_out_(n_out), n_s_(n_s), rows_(std::move(rows)) {
  if (n_in_ == 0 || n_out_ == 0) {
    fail(ErrorKind::invalid_parameter, "n_in and n_out must be positive");
  }
  const unsigned width = window_bits();
  if (width > trellis_cap || width > kMaxWindowBits) {
    fail(ErrorKind::resource_limit,
         "n_in*(n_s+1) = " + std::to_string(width) + " exceeds trellis cap " +
             std::to_string(std::min(trellis_cap, kMaxWindowBits)));
  }
  if (rows_.size() != n_out_) {
    fail(ErrorKind::invalid_parameter, "matrix must have n_out rows");
  }
  for (const auto& r : rows_) {
    if (r.size() != width) {
      fail(ErrorKind::invalid_parameter, "matrix rows must have (n_s+1)*n_in columns");
    }
  }
  columns_.assign(width, PackedBitVector(n_out_));
  for (unsigned r = 0; r < n_out_; ++r) {
    for (unsigned c = 0; c < width; ++c) {
      if (rows_[r].get(c)) columns_[c].set(r, true);
    }
  }
}

PackedBitVector DecoderSpec::chunk_output(unsigned chunk, InputVector u) const {
  PackedBitVector out(n_out_);
  for (unsigned j = 0; j < n_in_; ++j) {
    if ((u >> (n_in_ - 1 - j)) & 1U) out ^= columns_[chunk * n_in_ + j];
  }
  return out;
}

PackedBitVector decode_block(const DecoderSpec& spec, std::span<const InputVector> window) {
  if (window.size() != spec.n_s() + 1) {
    fail(ErrorKind::invalid_parameter, "window must hold n_s+1 input vectors");
  }
  PackedBitVector out(spec.n_out());
  for (unsigned k = 0; k < window.size(); ++k) {
    if (window[k] != 0) out ^= spec.chunk_output(k, window[k]);
  }
  return out;
}

std::vector<PackedBitVector> decode_stream(const DecoderSpec& spec,
                                           std::span<const InputVector> stream, std::size_t l) {
  const std::size_t depth = spec.n_s() + 1;
  if (stream.size() < l + spec.n_s()) {
    fail(ErrorKind::invalid_parameter, "input stream shorter than l + n_s vectors");
  }
  // Shift-register form: each input's chunk contribution is computed once
  // and reused by the n_s+1 blocks it participates in.
  std::vector<PackedBitVector> blocks(l, PackedBitVector(spec.n_out()));
  for (std::size_t t = 0; t < l + spec.n_s(); ++t) {
    if (stream[t] == 0) continue;
    for (std::size_t k = 0; k < depth; ++k) {
      // Input t sits at chunk k of block t - k.
      if (t < k || t - k >= l) continue;
      blocks[t - k] ^= spec.chunk_output(static_cast<unsigned>(k), stream[t]);
    }
  }
  return blocks;
}

PackedBitVector decode_plane(const DecoderSpec& spec, std::span<const InputVector> stream,
                             std::size_t length) {
  const std::size_t l = (length + spec.n_out() - 1) / spec.n_out();
  PackedBitVector plane;
  for (const auto& block : decode_stream(spec, stream, l)) plane.append(block);
  plane.resize(length);
  return plane;
}

HardwareCost hardware_cost(unsigned n_in, unsigned n_out, unsigned n_s) {
  const std::uint64_t entries = std::uint64_t{n_out} * (n_s + 1) * n_in;
  return HardwareCost{
      .xor_gates = (entries + 1) / 2,
      .transistors = 3 * entries,
      .extra_latency_cycles = n_s,
  };
}

HardwareCost hardware_cost(const DecoderSpec& spec) {
  return hardware_cost(spec.n_in(), spec.n_out(), spec.n_s());
}

namespace {
constexpr char kMatrixMagic[4] = {'X', 'M', 'T', 'X'};
}

void write_matrix_blob(const DecoderSpec& spec, BitWriter& out) {
  for (char c : kMatrixMagic) out.put(static_cast<std::uint8_t>(c), 8);
  out.put(spec.n_in(), 32);
  out.put(spec.n_out(), 32);
  out.put(spec.n_s(), 32);
  for (const auto& r : spec.rows()) out.put_bits(r);
  out.align();
}

std::vector<std::uint8_t> write_matrix_blob(const DecoderSpec& spec) {
  BitWriter out;
  write_matrix_blob(spec, out);
  return std::move(out).take();
}

DecoderSpec read_matrix_blob(BitReader& in, unsigned trellis_cap) {
  for (char c : kMatrixMagic) {
    if (in.get(8) != static_cast<std::uint8_t>(c)) {
      fail(ErrorKind::corrupt_artifact, "bad matrix magic (expected XMTX)");
    }
  }
  const auto n_in = static_cast<unsigned>(in.get(32));
  const auto n_out = static_cast<unsigned>(in.get(32));
  const auto n_s = static_cast<unsigned>(in.get(32));
  if (n_in == 0 || n_out == 0 || n_in > kMaxWindowBits || n_s >= kMaxWindowBits ||
      std::uint64_t{n_out} * (n_s + 1) * n_in > in.remaining()) {
    fail(ErrorKind::corrupt_artifact, "matrix header dimensions are inconsistent");
  }
  std::vector<PackedBitVector> rows;
  rows.reserve(n_out);
  for (unsigned r = 0; r < n_out; ++r) rows.push_back(in.get_bits((n_s + 1) * n_in));
  in.align();
  return DecoderSpec(n_in, n_out, n_s, std::move(rows), trellis_cap);
}

DecoderSpec read_matrix_blob(std::span<const std::uint8_t> bytes, unsigned trellis_cap) {
  BitReader in(bytes);
  DecoderSpec spec = read_matrix_blob(in, trellis_cap);
  if (in.remaining() != 0) fail(ErrorKind::corrupt_artifact, "trailing bytes after matrix");
  return spec;
}

}  // namespace f2f
