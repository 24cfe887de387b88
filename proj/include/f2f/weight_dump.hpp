#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "f2f/bitplane.hpp"

namespace f2f {

// A raw little-endian weight file plus a JSON manifest
// {"shape": [...], "bit_width": n, "mask_file": "...", "weights_file": "..."}.
// File names in the manifest resolve relative to the manifest's directory.
struct WeightDump {
  TensorManifest manifest;
  std::vector<std::uint8_t> weights;
  PackedBitVector mask;
  std::filesystem::path mask_path;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

PackedBitVector read_mask_file(const std::filesystem::path& path, std::size_t length);
void write_mask_file(const std::filesystem::path& path, const PackedBitVector& mask);

// `weights_override` replaces the manifest's weights_file when given.
WeightDump load_weight_dump(const std::filesystem::path& manifest_path,
                            const std::optional<std::filesystem::path>& weights_override = {});

// Writes <stem>.json, <stem>.bin and <stem>.mask next to each other.
std::filesystem::path save_weight_dump(const std::filesystem::path& stem, const TensorManifest& manifest,
                                       std::span<const std::uint8_t> weights,
                                       const PackedBitVector& mask);

}  // namespace f2f
