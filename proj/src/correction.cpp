#include "f2f/correction.hpp"

#include <bit>
#include <string>

#include "f2f/error.hpp"

namespace f2f {

void CorrectionConfig::validate() const {
  if (p < 2 || !std::has_single_bit(p)) {
    fail(ErrorKind::invalid_parameter, "correction block length p must be a power of two >= 2");
  }
}

unsigned CorrectionConfig::position_bits() const {
  validate();
  return static_cast<unsigned>(std::countr_zero(p));
}

std::size_t CorrectionStream::mismatches() const {
  std::size_t n = 0;
  for (const auto& list : positions) n += list.size();
  return n;
}

CorrectionStream build_correction(const PackedBitVector& decoded, const PackedBitVector& original,
                                  const PackedBitVector& mask, const CorrectionConfig& cfg) {
  cfg.validate();
  if (decoded.size() != original.size() || decoded.size() != mask.size()) {
    fail(ErrorKind::invalid_parameter, "correction inputs differ in length");
  }
  const std::size_t length = decoded.size();
  const std::size_t windows = (length + cfg.p - 1) / cfg.p;
  const PackedBitVector wrong = (decoded ^ original) & mask;

  CorrectionStream stream;
  stream.flags = PackedBitVector(windows);
  const auto words = wrong.words();
  std::vector<std::uint32_t> current;
  std::size_t current_window = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
      const std::size_t pos = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      const std::size_t window = pos / cfg.p;
      if (!current.empty() && window != current_window) {
        stream.positions.push_back(std::move(current));
        current.clear();
      }
      current_window = window;
      stream.flags.set(window, true);
      current.push_back(static_cast<std::uint32_t>(pos % cfg.p));
    }
  }
  if (!current.empty()) stream.positions.push_back(std::move(current));
  return stream;
}

namespace {

void check_consistent(const CorrectionStream& stream, std::size_t length,
                      const CorrectionConfig& cfg) {
  const std::size_t windows = (length + cfg.p - 1) / cfg.p;
  if (stream.flags.size() != windows) {
    fail(ErrorKind::corrupt_artifact, "correction flag count does not match plane length");
  }
  if (stream.positions.size() != stream.flags.popcount()) {
    fail(ErrorKind::corrupt_artifact, "correction entry lists do not match flags");
  }
}

}  // namespace

PackedBitVector apply_correction(PackedBitVector decoded, const CorrectionStream& stream,
                                 const CorrectionConfig& cfg) {
  cfg.validate();
  check_consistent(stream, decoded.size(), cfg);
  std::size_t list = 0;
  for (std::size_t window = 0; window < stream.flags.size(); ++window) {
    if (!stream.flags.get(window)) continue;
    const auto& positions = stream.positions[list++];
    if (positions.empty()) fail(ErrorKind::corrupt_artifact, "flagged window without entries");
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const std::size_t global = window * cfg.p + positions[i];
      if (positions[i] >= cfg.p || global >= decoded.size()) {
        fail(ErrorKind::corrupt_artifact, "correction position out of range");
      }
      if (i > 0 && positions[i] <= positions[i - 1]) {
        fail(ErrorKind::corrupt_artifact, "correction positions not strictly increasing");
      }
      decoded.flip(global);
    }
  }
  return decoded;
}

std::uint64_t correction_bits(const CorrectionStream& stream, const CorrectionConfig& cfg) {
  return stream.flags.size() + stream.mismatches() * cfg.n_c() + stream.positions.size();
}

void write_correction(BitWriter& out, const CorrectionStream& stream, const CorrectionConfig& cfg) {
  const unsigned width = cfg.position_bits();
  out.put_bits(stream.flags);
  for (const auto& list : stream.positions) {
    for (std::uint32_t pos : list) {
      out.put_bit(true);
      out.put(pos, width);
    }
    out.put_bit(false);
  }
}

CorrectionStream read_correction(BitReader& in, std::size_t plane_length,
                                 const CorrectionConfig& cfg) {
  const unsigned width = cfg.position_bits();
  CorrectionStream stream;
  stream.flags = in.get_bits((plane_length + cfg.p - 1) / cfg.p);
  const std::size_t flagged = stream.flags.popcount();
  stream.positions.reserve(flagged);
  for (std::size_t f = 0; f < flagged; ++f) {
    std::vector<std::uint32_t> list;
    while (in.get_bit()) {
      if (list.size() >= cfg.p) fail(ErrorKind::corrupt_artifact, "correction list overruns window");
      list.push_back(static_cast<std::uint32_t>(in.get(width)));
    }
    stream.positions.push_back(std::move(list));
  }
  return stream;
}

}  // namespace f2f
