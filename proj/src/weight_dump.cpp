#include "f2f/weight_dump.hpp"

#include <fstream>
#include <iterator>

#include <json.hpp>

#include "f2f/error.hpp"

namespace f2f {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::malformed_input, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::malformed_input, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::malformed_input, "short write to " + path.string());
}

PackedBitVector read_mask_file(const std::filesystem::path& path, std::size_t length) {
  const auto bytes = read_file(path);
  if (bytes.size() != (length + 7) / 8) {
    fail(ErrorKind::malformed_input, "mask file " + path.string() + " has " +
                                         std::to_string(bytes.size()) + " bytes, expected " +
                                         std::to_string((length + 7) / 8));
  }
  return PackedBitVector::from_bytes(bytes, length);
}

void write_mask_file(const std::filesystem::path& path, const PackedBitVector& mask) {
  write_file(path, mask.to_bytes());
}

WeightDump load_weight_dump(const std::filesystem::path& manifest_path,
                            const std::optional<std::filesystem::path>& weights_override) {
  const auto text = read_file(manifest_path);
  const auto j = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorKind::malformed_input, manifest_path.string() + " is not a JSON object");
  }
  WeightDump dump;
  try {
    dump.manifest.shape = j.at("shape").get<std::vector<std::size_t>>();
    dump.manifest.bit_width = j.at("bit_width").get<unsigned>();
    const auto dir = manifest_path.parent_path();
    dump.mask_path = dir / j.at("mask_file").get<std::string>();
    const auto weights_path =
        weights_override ? *weights_override : dir / j.at("weights_file").get<std::string>();
    dump.manifest.validate();
    dump.weights = read_file(weights_path);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::malformed_input, "manifest " + manifest_path.string() + ": " + e.what());
  }
  dump.mask = read_mask_file(dump.mask_path, dump.manifest.element_count());
  const std::size_t expected = dump.manifest.element_count() * dump.manifest.element_bytes();
  if (dump.weights.size() != expected) {
    fail(ErrorKind::malformed_input, "weight file has " + std::to_string(dump.weights.size()) +
                                         " bytes, manifest expects " + std::to_string(expected));
  }
  return dump;
}

std::filesystem::path save_weight_dump(const std::filesystem::path& stem,
                                       const TensorManifest& manifest,
                                       std::span<const std::uint8_t> weights,
                                       const PackedBitVector& mask) {
  manifest.validate();
  auto with_ext = [&](const char* ext) {
    auto p = stem;
    p += ext;
    return p;
  };
  const auto manifest_path = with_ext(".json");
  const auto weights_path = with_ext(".bin");
  const auto mask_path = with_ext(".mask");
  write_file(weights_path, weights);
  write_mask_file(mask_path, mask);
  const nlohmann::json j = {
      {"shape", manifest.shape},
      {"bit_width", manifest.bit_width},
      {"weights_file", weights_path.filename().string()},
      {"mask_file", mask_path.filename().string()},
  };
  const std::string text = j.dump(2) + "\n";
  write_file(manifest_path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  return manifest_path;
}

}  // namespace f2f
