#include "f2f/bitvec.hpp"

#include <algorithm>
#include <bit>

#include "f2f/error.hpp"

namespace f2f {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::malformed_input: return "malformed_input";
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::undefined_ratio: return "undefined_ratio";
    case ErrorKind::resource_limit: return "resource_limit";
    case ErrorKind::corrupt_artifact: return "corrupt_artifact";
  }
  return "unknown";
}

namespace {

constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

constexpr std::uint64_t low_mask(unsigned count) {
  return count >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
}

}  // namespace

PackedBitVector::PackedBitVector(std::size_t length)
    : length_(length), words_(words_for(length), 0) {}

PackedBitVector PackedBitVector::from_string(std::string_view bits) {
  PackedBitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      fail(ErrorKind::malformed_input, "bit string may only contain '0' and '1'");
    }
  }
  return v;
}

PackedBitVector PackedBitVector::from_bytes(std::span<const std::uint8_t> bytes,
                                            std::size_t length) {
  if (bytes.size() * 8 < length) {
    fail(ErrorKind::malformed_input, "byte buffer shorter than bit length");
  }
  PackedBitVector v(length);
  const std::size_t used = (length + 7) / 8;
  for (std::size_t b = 0; b < used; ++b) {
    v.words_[b >> 3] |= std::uint64_t{bytes[b]} << (8 * (b & 7));
  }
  v.clear_padding();
  return v;
}

std::uint64_t PackedBitVector::extract(std::size_t offset, unsigned count) const noexcept {
  if (count == 0 || offset >= length_) return 0;
  const std::size_t w = offset >> 6;
  const unsigned shift = offset & 63;
  std::uint64_t value = words_[w] >> shift;
  if (shift != 0 && shift + count > 64 && w + 1 < words_.size()) {
    value |= words_[w + 1] << (64 - shift);
  }
  return value & low_mask(count);
}

void PackedBitVector::deposit(std::size_t offset, unsigned count, std::uint64_t value) noexcept {
  if (count == 0) return;
  value &= low_mask(count);
  const std::size_t w = offset >> 6;
  const unsigned shift = offset & 63;
  const std::uint64_t m = low_mask(count);
  words_[w] = (words_[w] & ~(m << shift)) | (value << shift);
  if (shift != 0 && shift + count > 64) {
    const unsigned spill = 64 - shift;
    words_[w + 1] = (words_[w + 1] & ~(m >> spill)) | (value >> spill);
  }
}

std::size_t PackedBitVector::popcount() const noexcept {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void PackedBitVector::flip_all() noexcept {
  for (auto& w : words_) w = ~w;
  clear_padding();
}

PackedBitVector PackedBitVector::flipped() const {
  PackedBitVector v = *this;
  v.flip_all();
  return v;
}

PackedBitVector PackedBitVector::slice(std::size_t offset, std::size_t count) const {
  PackedBitVector out(count);
  for (std::size_t done = 0; done < count; done += 64) {
    const auto n = static_cast<unsigned>(std::min<std::size_t>(64, count - done));
    out.deposit(done, n, extract(offset + done, n));
  }
  return out;
}

void PackedBitVector::append(const PackedBitVector& other) {
  const std::size_t base = length_;
  resize(length_ + other.length_);
  for (std::size_t done = 0; done < other.length_; done += 64) {
    const auto n = static_cast<unsigned>(std::min<std::size_t>(64, other.length_ - done));
    deposit(base + done, n, other.extract(done, n));
  }
}

void PackedBitVector::resize(std::size_t length) {
  if (length < length_) {
    length_ = length;
    words_.resize(words_for(length));
    clear_padding();
  } else {
    length_ = length;
    words_.resize(words_for(length), 0);
  }
}

std::vector<std::uint8_t> PackedBitVector::to_bytes() const {
  std::vector<std::uint8_t> out((length_ + 7) / 8);
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b] = static_cast<std::uint8_t>(words_[b >> 3] >> (8 * (b & 7)));
  }
  return out;
}

std::string PackedBitVector::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

PackedBitVector& PackedBitVector::operator^=(const PackedBitVector& rhs) {
  if (rhs.length_ != length_) fail(ErrorKind::invalid_parameter, "bit vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= rhs.words_[i];
  return *this;
}

PackedBitVector& PackedBitVector::operator&=(const PackedBitVector& rhs) {
  if (rhs.length_ != length_) fail(ErrorKind::invalid_parameter, "bit vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= rhs.words_[i];
  return *this;
}

PackedBitVector& PackedBitVector::operator|=(const PackedBitVector& rhs) {
  if (rhs.length_ != length_) fail(ErrorKind::invalid_parameter, "bit vector length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= rhs.words_[i];
  return *this;
}

void PackedBitVector::clear_padding() noexcept {
  if (const unsigned tail = length_ & 63; tail != 0) {
    words_.back() &= low_mask(tail);
  }
}

void BitWriter::put(std::uint64_t value, unsigned count) {
  value &= low_mask(count);
  while (count > 0) {
    const unsigned used = bits_ & 7;
    if (used == 0) bytes_.push_back(0);
    const unsigned take = std::min(count, 8 - used);
    bytes_.back() |= static_cast<std::uint8_t>((value & low_mask(take)) << used);
    value >>= take;
    count -= take;
    bits_ += take;
  }
}

void BitWriter::put_bits(const PackedBitVector& bits) {
  for (std::size_t done = 0; done < bits.size(); done += 64) {
    const auto n = static_cast<unsigned>(std::min<std::size_t>(64, bits.size() - done));
    put(bits.extract(done, n), n);
  }
}

void BitWriter::align() { bits_ = (bits_ + 7) & ~std::size_t{7}; }

std::uint64_t BitReader::get(unsigned count) {
  if (count > remaining()) fail(ErrorKind::corrupt_artifact, "bitstream truncated");
  std::uint64_t value = 0;
  unsigned filled = 0;
  while (filled < count) {
    const unsigned used = pos_ & 7;
    const unsigned take = std::min(count - filled, 8 - used);
    const std::uint64_t chunk = (bytes_[pos_ >> 3] >> used) & low_mask(take);
    value |= chunk << filled;
    filled += take;
    pos_ += take;
  }
  return value;
}

PackedBitVector BitReader::get_bits(std::size_t count) {
  if (count > remaining()) fail(ErrorKind::corrupt_artifact, "bitstream truncated");
  PackedBitVector out(count);
  for (std::size_t done = 0; done < count; done += 64) {
    const auto n = static_cast<unsigned>(std::min<std::size_t>(64, count - done));
    out.deposit(done, n, get(n));
  }
  return out;
}

void BitReader::align() {
  if (const unsigned used = pos_ & 7; used != 0) {
    if (get(8 - used) != 0) fail(ErrorKind::corrupt_artifact, "nonzero alignment padding");
  }
}

}  // namespace f2f
