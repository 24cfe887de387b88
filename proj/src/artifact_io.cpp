#include <openssl/evp.h>
#include <zlib.h>

#include <cstring>
#include <string>

#include "f2f/codec.hpp"
#include "f2f/error.hpp"

namespace f2f {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * size);
  for (unsigned i = 0; i < size; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 15]);
  }
  return hex;
}

namespace {

constexpr char kMagic[4] = {'F', '2', 'F', 'X'};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t done = 0;
  while (done < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - done, 1U << 30);
    crc = crc32(crc, bytes.data() + done, static_cast<uInt>(n));
    done += n;
  }
  return static_cast<std::uint32_t>(crc);
}

const char* storage_name(MaskStorage s) {
  return s == MaskStorage::verbatim ? "verbatim" : "reference";
}

nlohmann::json header_json(const EncodedArtifact& a) {
  const auto& h = a.header;
  return {
      {"format", "f2fx"},
      {"manifest", {{"shape", h.manifest.shape}, {"bit_width", h.manifest.bit_width}}},
      {"decoder", {{"n_in", a.spec.n_in()}, {"n_out", a.spec.n_out()}, {"n_s", a.spec.n_s()}}},
      {"correction", {{"p", h.correction.p}}},
      {"s_observed", h.s_observed},
      {"efficiency_percent", h.efficiency_percent},
      {"mask", {{"storage", storage_name(h.mask.storage)},
                {"path", h.mask.path},
                {"sha256", h.mask.sha256}}},
      {"planes", a.planes.size()},
  };
}

void write_plane_record(BitWriter& out, const PlaneRecord& record, const DecoderSpec& spec,
                        const CorrectionConfig& cfg) {
  out.put_bit(record.inverted);
  for (std::size_t t = spec.n_s(); t < record.stream.size(); ++t) {
    out.put(record.stream[t], spec.n_in());
  }
  write_correction(out, record.correction, cfg);
}

PlaneRecord read_plane_record(BitReader& in, std::size_t length, const DecoderSpec& spec,
                              const CorrectionConfig& cfg) {
  const std::size_t l = (length + spec.n_out() - 1) / spec.n_out();
  PlaneRecord record;
  record.inverted = in.get_bit();
  if (std::uint64_t{l} * spec.n_in() > in.remaining()) {
    fail(ErrorKind::corrupt_artifact, "plane record truncated");
  }
  record.stream.assign(spec.n_s(), 0);
  record.stream.reserve(l + spec.n_s());
  for (std::size_t t = 0; t < l; ++t) {
    record.stream.push_back(static_cast<InputVector>(in.get(spec.n_in())));
  }
  record.correction = read_correction(in, length, cfg);
  return record;
}

template <class T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::corrupt_artifact, std::string("header missing ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::corrupt_artifact, std::string("header field ") + key + ": " + e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_artifact(const EncodedArtifact& artifact,
                                             std::vector<std::uint64_t>* record_bits) {
  BitWriter out;
  for (char c : kMagic) out.put(static_cast<std::uint8_t>(c), 8);
  out.put(kArtifactVersion, 16);
  const std::string header = header_json(artifact).dump();
  out.put(header.size(), 32);
  for (char c : header) out.put(static_cast<std::uint8_t>(c), 8);

  write_matrix_blob(artifact.spec, out);

  const auto& mask = artifact.header.mask;
  if (mask.storage == MaskStorage::verbatim) {
    if (!mask.bits) fail(ErrorKind::invalid_parameter, "verbatim mask storage without mask bits");
    out.put(mask.bits->size(), 64);
    out.put_bits(*mask.bits);
    out.align();
  }

  if (record_bits) record_bits->clear();
  for (const auto& record : artifact.planes) {
    const std::size_t start = out.bit_count();
    write_plane_record(out, record, artifact.spec, artifact.header.correction);
    if (record_bits) record_bits->push_back(out.bit_count() - start);
    out.align();
  }

  std::vector<std::uint8_t> bytes = std::move(out).take();
  const std::uint32_t crc = crc32_of(bytes);
  for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
  return bytes;
}

EncodedArtifact deserialize_artifact(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 + 2 + 4 + 4) fail(ErrorKind::corrupt_artifact, "artifact too short");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorKind::corrupt_artifact, "bad artifact magic (expected F2FX)");
  }
  const auto body = bytes.first(bytes.size() - 4);
  std::uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i) stored_crc |= std::uint32_t{bytes[body.size() + i]} << (8 * i);
  BitReader in(body);
  in.get(32);
  if (const auto version = in.get(16); version != kArtifactVersion) {
    fail(ErrorKind::corrupt_artifact, "unsupported artifact version " + std::to_string(version));
  }
  if (crc32_of(body) != stored_crc) fail(ErrorKind::corrupt_artifact, "artifact checksum mismatch");

  const auto header_size = in.get(32);
  if (header_size * 8 > in.remaining()) fail(ErrorKind::corrupt_artifact, "header truncated");
  std::string text(header_size, '\0');
  for (auto& c : text) c = static_cast<char>(in.get(8));
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorKind::corrupt_artifact, "header is not JSON");

  ArtifactHeader header;
  const auto manifest = require<nlohmann::json>(j, "manifest");
  header.manifest.shape = require<std::vector<std::size_t>>(manifest, "shape");
  header.manifest.bit_width = require<unsigned>(manifest, "bit_width");
  header.correction.p = require<std::uint32_t>(require<nlohmann::json>(j, "correction"), "p");
  header.s_observed = require<double>(j, "s_observed");
  header.efficiency_percent = require<double>(j, "efficiency_percent");
  const auto mask = require<nlohmann::json>(j, "mask");
  const auto storage = require<std::string>(mask, "storage");
  if (storage != "reference" && storage != "verbatim") {
    fail(ErrorKind::corrupt_artifact, "unknown mask storage " + storage);
  }
  header.mask.storage = storage == "verbatim" ? MaskStorage::verbatim : MaskStorage::reference;
  header.mask.path = require<std::string>(mask, "path");
  header.mask.sha256 = require<std::string>(mask, "sha256");
  const auto planes = require<std::size_t>(j, "planes");
  try {
    header.manifest.validate();
    header.correction.validate();
  } catch (const Error& e) {
    fail(ErrorKind::corrupt_artifact, e.what());
  }
  if (planes != header.manifest.bit_width) {
    fail(ErrorKind::corrupt_artifact, "plane count does not match bit_width");
  }

  DecoderSpec spec = read_matrix_blob(in, kMaxWindowBits);
  const auto decoder = require<nlohmann::json>(j, "decoder");
  if (require<unsigned>(decoder, "n_in") != spec.n_in() ||
      require<unsigned>(decoder, "n_out") != spec.n_out() ||
      require<unsigned>(decoder, "n_s") != spec.n_s()) {
    fail(ErrorKind::corrupt_artifact, "header decoder shape disagrees with matrix section");
  }

  const std::size_t length = header.manifest.element_count();
  if (header.mask.storage == MaskStorage::verbatim) {
    const auto bits = in.get(64);
    if (bits != length) fail(ErrorKind::corrupt_artifact, "verbatim mask length mismatch");
    header.mask.bits = in.get_bits(length);
    in.align();
  }

  std::vector<PlaneRecord> records;
  records.reserve(planes);
  for (std::size_t k = 0; k < planes; ++k) {
    records.push_back(read_plane_record(in, length, spec, header.correction));
    in.align();
  }
  if (in.remaining() != 0) fail(ErrorKind::corrupt_artifact, "trailing bytes after plane records");

  return EncodedArtifact{std::move(header), std::move(spec), std::move(records)};
}

}  // namespace f2f
