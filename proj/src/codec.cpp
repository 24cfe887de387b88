#include "f2f/codec.hpp"

#include <sstream>
#include <stdexcept>
#include <tuple>

#include "f2f/error.hpp"

namespace f2f {

double efficiency_percent(std::uint64_t matched, std::uint64_t unpruned) {
  if (unpruned == 0) return 100.0;
  return 100.0 * static_cast<double>(matched) / static_cast<double>(unpruned);
}

double memory_save_analytic(double s, double e, double n_c) {
  return 1.0 - (1.0 - s) * (1.0 + (1.0 - e) * n_c);
}

std::uint64_t exact_footprint(std::size_t plane_length, std::size_t l, const DecoderSpec& spec,
                              const CorrectionStream& correction, const CorrectionConfig& cfg) {
  if (correction.flags.size() != (plane_length + cfg.p - 1) / cfg.p) {
    fail(ErrorKind::invalid_parameter, "correction stream does not match plane length");
  }
  return std::uint64_t{l} * spec.n_in() + correction_bits(correction, cfg) + 1;
}

PlaneCompression compress_planes(const BitPlaneSet& set, const DecoderSpec& spec,
                                 const CorrectionConfig& cfg, const EncoderOptions& options) {
  cfg.validate();
  const std::size_t length = set.length();
  const std::size_t l = (length + spec.n_out() - 1) / spec.n_out();
  const std::size_t live = set.mask.popcount();

  PlaneCompression out;
  out.records.reserve(set.planes.size());
  out.reports.reserve(set.planes.size());
  for (const auto& original : set.planes) {
    if (original.size() != length) fail(ErrorKind::malformed_input, "plane length mismatch");
    PlaneRecord record;
    PackedBitVector plane = original;
    if (live > 0) std::tie(plane, record.inverted) = maybe_invert(original, set.mask);

    EncodeResult encoded = encode_plane(spec, plane, set.mask, options);
    const PackedBitVector decoded = decode_plane(spec, encoded.stream, length);
    record.correction = build_correction(decoded, plane, set.mask, cfg);
    if (record.correction.mismatches() != encoded.total_errors) {
      throw std::logic_error("encoder error count disagrees with decoded mismatches");
    }
    record.stream = std::move(encoded.stream);

    PlaneReport report;
    report.inverted = record.inverted;
    report.unpruned_bits = live;
    report.error_bits = record.correction.mismatches();
    report.encoded_bits = std::uint64_t{l} * spec.n_in();
    report.correction_bits = correction_bits(record.correction, cfg);
    report.footprint_bits = exact_footprint(length, l, spec, record.correction, cfg);
    out.reports.push_back(report);
    out.records.push_back(std::move(record));
  }
  return out;
}

std::vector<PackedBitVector> decode_planes(std::span<const PlaneRecord> records,
                                           std::size_t length, const DecoderSpec& spec,
                                           const CorrectionConfig& cfg) {
  const std::size_t l = (length + spec.n_out() - 1) / spec.n_out();
  std::vector<PackedBitVector> planes;
  planes.reserve(records.size());
  for (const auto& record : records) {
    if (record.stream.size() != l + spec.n_s()) {
      fail(ErrorKind::corrupt_artifact, "encoded stream length does not match plane");
    }
    PackedBitVector plane =
        apply_correction(decode_plane(spec, record.stream, length), record.correction, cfg);
    if (record.inverted) plane.flip_all();
    planes.push_back(std::move(plane));
  }
  return planes;
}

CompressOutput compress(std::span<const std::uint8_t> raw_weights, const TensorManifest& manifest,
                        const PackedBitVector& mask, const DecoderSpec& spec,
                        const CorrectionConfig& cfg, const CompressOptions& options) {
  cfg.validate();
  const BitPlaneSet set = group_bitplanes(raw_weights, manifest, mask);
  PlaneCompression planes = compress_planes(set, spec, cfg, options.encoder);

  EfficiencyReport report;
  const std::size_t length = set.length();
  report.original_bits = std::uint64_t{length} * manifest.bit_width;
  report.planes = planes.reports;
  for (const auto& p : planes.reports) {
    report.unpruned_bits += p.unpruned_bits;
    report.error_bits += p.error_bits;
    report.encoded_bits += p.encoded_bits;
    report.correction_bits += p.correction_bits;
    report.exact_footprint_bits += p.footprint_bits;
  }
  report.matched_bits = report.unpruned_bits - report.error_bits;
  report.efficiency_percent = efficiency_percent(report.matched_bits, report.unpruned_bits);
  report.s_observed =
      1.0 - static_cast<double>(mask.popcount()) / static_cast<double>(length);
  report.n_c = cfg.n_c();
  report.analytic_memory_save =
      memory_save_analytic(report.s_observed, report.efficiency_percent / 100.0, report.n_c);
  report.exact_memory_save = 1.0 - static_cast<double>(report.exact_footprint_bits) /
                                       static_cast<double>(report.original_bits);

  ArtifactHeader header;
  header.manifest = manifest;
  header.correction = cfg;
  header.s_observed = report.s_observed;
  header.efficiency_percent = report.efficiency_percent;
  header.mask.storage = options.mask_storage;
  header.mask.path = options.mask_path;
  header.mask.sha256 = sha256_hex(mask.to_bytes());
  if (options.mask_storage == MaskStorage::verbatim) header.mask.bits = mask;

  return CompressOutput{
      .artifact = EncodedArtifact{std::move(header), spec, std::move(planes.records)},
      .report = std::move(report),
  };
}

std::vector<std::uint8_t> decompress(const EncodedArtifact& artifact) {
  const TensorManifest& manifest = artifact.header.manifest;
  manifest.validate();
  if (artifact.planes.size() != manifest.bit_width) {
    fail(ErrorKind::corrupt_artifact, "plane count does not match bit_width");
  }
  const auto planes = decode_planes(artifact.planes, manifest.element_count(), artifact.spec,
                                    artifact.header.correction);
  return ungroup_bitplanes(planes, manifest);
}

nlohmann::json EfficiencyReport::to_json() const {
  nlohmann::json planes_json = nlohmann::json::array();
  for (const auto& p : planes) {
    planes_json.push_back({
        {"inverted", p.inverted},
        {"unpruned_bits", p.unpruned_bits},
        {"error_bits", p.error_bits},
        {"encoded_bits", p.encoded_bits},
        {"correction_bits", p.correction_bits},
        {"footprint_bits", p.footprint_bits},
    });
  }
  return {
      {"original_bits", original_bits},
      {"unpruned_bits", unpruned_bits},
      {"matched_bits", matched_bits},
      {"error_bits", error_bits},
      {"efficiency_percent", efficiency_percent},
      {"encoded_bits", encoded_bits},
      {"correction_bits", correction_bits},
      {"exact_footprint_bits", exact_footprint_bits},
      {"s_observed", s_observed},
      {"n_c", n_c},
      {"analytic_memory_save", analytic_memory_save},
      {"exact_memory_save", exact_memory_save},
      {"planes", std::move(planes_json)},
  };
}

std::string EfficiencyReport::csv_header() {
  return "original_bits,unpruned_bits,matched_bits,error_bits,efficiency_percent,encoded_bits,"
         "correction_bits,exact_footprint_bits,s_observed,n_c,analytic_memory_save,"
         "exact_memory_save";
}

std::string EfficiencyReport::csv_row() const {
  std::ostringstream row;
  row.precision(10);
  row << original_bits << ',' << unpruned_bits << ',' << matched_bits << ',' << error_bits << ','
      << efficiency_percent << ',' << encoded_bits << ',' << correction_bits << ','
      << exact_footprint_bits << ',' << s_observed << ',' << n_c << ','
      << analytic_memory_save << ',' << exact_memory_save;
  return row.str();
}

}  // namespace f2f
