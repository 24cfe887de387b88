#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace f2f {

// Dense bit array with an explicit length. Bits are stored in 64-bit words,
// bit i lives in word i/64 at position i%64. Padding bits past size() are
// kept at zero so word-level popcounts and comparisons stay exact.
//
// The byte serialization is little-endian, LSB-first within a byte, which on
// this layout is simply the words written out in little-endian order.
class PackedBitVector {
 public:
  PackedBitVector() = default;
  explicit PackedBitVector(std::size_t length);

  // "0110" -> bit 0 = '0', bit 1 = '1', ... (left to right is index order).
  static PackedBitVector from_string(std::string_view bits);
  static PackedBitVector from_bytes(std::span<const std::uint8_t> bytes,
                                    std::size_t length);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  bool get(std::size_t i) const noexcept {
    return i < length_ && ((words_[i >> 6] >> (i & 63)) & 1U);
  }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  // Reads `count` (<= 64) bits starting at `offset`; bits past size() read 0.
  std::uint64_t extract(std::size_t offset, unsigned count) const noexcept;
  // Writes the low `count` bits of `value` starting at `offset`; the range
  // must lie within size().
  void deposit(std::size_t offset, unsigned count, std::uint64_t value) noexcept;

  std::size_t popcount() const noexcept;
  void flip_all() noexcept;
  PackedBitVector flipped() const;

  // Copy of bits [offset, offset + count); positions past size() read 0.
  PackedBitVector slice(std::size_t offset, std::size_t count) const;
  void append(const PackedBitVector& other);
  void resize(std::size_t length);

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> mutable_words() noexcept { return words_; }

  std::vector<std::uint8_t> to_bytes() const;
  std::string to_string() const;

  PackedBitVector& operator^=(const PackedBitVector& rhs);
  PackedBitVector& operator&=(const PackedBitVector& rhs);
  PackedBitVector& operator|=(const PackedBitVector& rhs);

  friend PackedBitVector operator^(PackedBitVector lhs, const PackedBitVector& rhs) {
    return lhs ^= rhs;
  }
  friend PackedBitVector operator&(PackedBitVector lhs, const PackedBitVector& rhs) {
    return lhs &= rhs;
  }
  friend PackedBitVector operator|(PackedBitVector lhs, const PackedBitVector& rhs) {
    return lhs |= rhs;
  }
  friend bool operator==(const PackedBitVector&, const PackedBitVector&) = default;

 private:
  void clear_padding() noexcept;

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

// Sequential LSB-first bit writer used by the artifact serializer.
class BitWriter {
 public:
  void put(std::uint64_t value, unsigned count);
  void put_bit(bool bit) { put(bit ? 1U : 0U, 1); }
  void put_bits(const PackedBitVector& bits);
  // Zero-pads to the next byte boundary.
  void align();

  std::size_t bit_count() const noexcept { return bits_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

// Reader counterpart; running past the end raises corrupt_artifact.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t get(unsigned count);
  bool get_bit() { return get(1) != 0; }
  PackedBitVector get_bits(std::size_t count);
  // Skips to the next byte boundary; the skipped bits must be zero.
  void align();

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() * 8 - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace f2f
