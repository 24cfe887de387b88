#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "f2f/bitvec.hpp"

namespace f2f {

// Default upper bound on n_in * (n_s + 1): the trellis context the encoder
// is willing to enumerate.
inline constexpr unsigned kDefaultTrellisCap = 26;
// Input vectors are carried in 32-bit words.
inline constexpr unsigned kMaxWindowBits = 32;

// One n_in-bit input vector. Column j of a chunk corresponds to bit
// (n_in - 1 - j) of the value, i.e. the value reads MSB-first left to right.
using InputVector = std::uint32_t;

// u_1 .. u_{l+n_s}; the first n_s vectors are the zero warm-up.
using InputStream = std::vector<InputVector>;

// The XOR-gate decoder: an n_out x ((n_s+1)*n_in) binary matrix. The window
// is concatenated oldest-first, so the oldest input vector occupies the
// lowest-index columns.
class DecoderSpec {
 public:
  DecoderSpec(unsigned n_in, unsigned n_out, unsigned n_s, std::vector<PackedBitVector> rows,
              unsigned trellis_cap = kDefaultTrellisCap);

  unsigned n_in() const noexcept { return n_in_; }
  unsigned n_out() const noexcept { return n_out_; }
  unsigned n_s() const noexcept { return n_s_; }
  unsigned window_bits() const noexcept { return (n_s_ + 1) * n_in_; }

  bool at(unsigned row, unsigned col) const { return rows_[row].get(col); }
  const PackedBitVector& row(unsigned r) const { return rows_[r]; }
  std::span<const PackedBitVector> rows() const noexcept { return rows_; }
  // Column c as an n_out-bit vector.
  const PackedBitVector& column(unsigned c) const { return columns_[c]; }

  // Contribution of input value `u` placed at window chunk `chunk`
  // (0 = oldest) to the output block.
  PackedBitVector chunk_output(unsigned chunk, InputVector u) const;

  friend bool operator==(const DecoderSpec& a, const DecoderSpec& b) {
    return a.n_in_ == b.n_in_ && a.n_out_ == b.n_out_ && a.n_s_ == b.n_s_ && a.rows_ == b.rows_;
  }

 private:
  unsigned n_in_;
  unsigned n_out_;
  unsigned n_s_;
  std::vector<PackedBitVector> rows_;
  std::vector<PackedBitVector> columns_;
};

// Output = M * (window[0] ++ window[1] ++ ... ) over GF(2).
PackedBitVector decode_block(const DecoderSpec& spec, std::span<const InputVector> window);

// Block b (0-based) = decode_block over stream[b .. b+n_s].
std::vector<PackedBitVector> decode_stream(const DecoderSpec& spec,
                                           std::span<const InputVector> stream, std::size_t l);

// Concatenates the decoded blocks and truncates to `length` bits.
PackedBitVector decode_plane(const DecoderSpec& spec, std::span<const InputVector> stream,
                             std::size_t length);

struct HardwareCost {
  std::uint64_t xor_gates = 0;
  std::uint64_t transistors = 0;
  std::uint64_t extra_latency_cycles = 0;
};

// Analytic gate count under a random half-filled matrix; three transistors
// per matrix entry (six per XOR gate) and one clock of latency per stage.
HardwareCost hardware_cost(const DecoderSpec& spec);
HardwareCost hardware_cost(unsigned n_in, unsigned n_out, unsigned n_s);

// Standalone matrix blob: "XMTX", n_in/n_out/n_s as LE u32, row-major packed bits.
std::vector<std::uint8_t> write_matrix_blob(const DecoderSpec& spec);
void write_matrix_blob(const DecoderSpec& spec, BitWriter& out);
DecoderSpec read_matrix_blob(std::span<const std::uint8_t> bytes,
                             unsigned trellis_cap = kDefaultTrellisCap);
DecoderSpec read_matrix_blob(BitReader& in, unsigned trellis_cap = kDefaultTrellisCap);

}  // namespace f2f
