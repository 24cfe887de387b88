#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "f2f/bitplane.hpp"
#include "f2f/correction.hpp"
#include "f2f/encoder.hpp"
#include "f2f/gf2decoder.hpp"

namespace f2f {

inline constexpr std::uint16_t kArtifactVersion = 1;

// Encoded form of one bit-plane.
struct PlaneRecord {
  bool inverted = false;
  InputStream stream;  // l + n_s vectors, warm-up zeros included (never serialized)
  CorrectionStream correction;

  friend bool operator==(const PlaneRecord&, const PlaneRecord&) = default;
};

enum class MaskStorage { reference, verbatim };

struct MaskReference {
  MaskStorage storage = MaskStorage::reference;
  std::string path;
  std::string sha256;
  std::optional<PackedBitVector> bits;  // present iff storage == verbatim

  friend bool operator==(const MaskReference&, const MaskReference&) = default;
};

struct ArtifactHeader {
  TensorManifest manifest;
  CorrectionConfig correction;
  double s_observed = 0.0;
  double efficiency_percent = 100.0;
  MaskReference mask;
};

struct EncodedArtifact {
  ArtifactHeader header;
  DecoderSpec spec;
  std::vector<PlaneRecord> planes;
};

struct PlaneReport {
  bool inverted = false;
  std::uint64_t unpruned_bits = 0;
  std::uint64_t error_bits = 0;
  std::uint64_t encoded_bits = 0;
  std::uint64_t correction_bits = 0;
  std::uint64_t footprint_bits = 0;
};

struct EfficiencyReport {
  std::uint64_t original_bits = 0;
  std::uint64_t unpruned_bits = 0;
  std::uint64_t matched_bits = 0;
  std::uint64_t error_bits = 0;
  double efficiency_percent = 100.0;  // 0/0 reported as 100
  std::uint64_t encoded_bits = 0;
  std::uint64_t correction_bits = 0;
  std::uint64_t exact_footprint_bits = 0;
  double s_observed = 0.0;
  unsigned n_c = 0;
  double analytic_memory_save = 0.0;
  double exact_memory_save = 0.0;
  std::vector<PlaneReport> planes;

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

double efficiency_percent(std::uint64_t matched, std::uint64_t unpruned);

// 1 - (1-S)(1 + (1-E) n_c), returned as-is even when negative.
double memory_save_analytic(double s, double e, double n_c);

// Serialized size of one plane record before byte alignment:
// l*n_in stream bits + flags + entries/terminators + 1 inversion flag.
std::uint64_t exact_footprint(std::size_t plane_length, std::size_t l, const DecoderSpec& spec,
                              const CorrectionStream& correction, const CorrectionConfig& cfg);

struct CompressOptions {
  EncoderOptions encoder;
  MaskStorage mask_storage = MaskStorage::reference;
  std::string mask_path;
};

struct PlaneCompression {
  std::vector<PlaneRecord> records;
  std::vector<PlaneReport> reports;
};

// invert -> slice -> trellis encode -> decode -> correction, per plane.
PlaneCompression compress_planes(const BitPlaneSet& set, const DecoderSpec& spec,
                                 const CorrectionConfig& cfg, const EncoderOptions& options = {});

// Decoded, corrected and un-inverted planes of length `length`.
std::vector<PackedBitVector> decode_planes(std::span<const PlaneRecord> records,
                                           std::size_t length, const DecoderSpec& spec,
                                           const CorrectionConfig& cfg);

struct CompressOutput {
  EncodedArtifact artifact;
  EfficiencyReport report;
};

CompressOutput compress(std::span<const std::uint8_t> raw_weights, const TensorManifest& manifest,
                        const PackedBitVector& mask, const DecoderSpec& spec,
                        const CorrectionConfig& cfg, const CompressOptions& options = {});

// Unpruned bits are exact; pruned positions carry whatever the decoder produced.
std::vector<std::uint8_t> decompress(const EncodedArtifact& artifact);

// File container: "F2FX", u16 version, u32-length JSON header, XMTX section,
// optional verbatim mask, byte-aligned plane records, trailing CRC-32.
// `record_bits` (optional) receives each plane record's unpadded bit length.
std::vector<std::uint8_t> serialize_artifact(const EncodedArtifact& artifact,
                                             std::vector<std::uint64_t>* record_bits = nullptr);
EncodedArtifact deserialize_artifact(std::span<const std::uint8_t> bytes);

std::string sha256_hex(std::span<const std::uint8_t> bytes);

}  // namespace f2f
