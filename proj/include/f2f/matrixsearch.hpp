#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "f2f/bitvec.hpp"
#include "f2f/encoder.hpp"
#include "f2f/gf2decoder.hpp"
#include "f2f/synth.hpp"

namespace f2f {

struct Calibration {
  PackedBitVector plane;
  PackedBitVector mask;
};

struct SearchConfig {
  unsigned trials = 32;
  std::uint64_t seed = 0;
  // When empty, a synthetic plane/mask of synthetic_bits at synthetic_s is
  // generated from the seed.
  std::optional<Calibration> calibration;
  std::size_t synthetic_bits = 50'000;
  double synthetic_s = 0.9;
  double fill_probability = 0.5;
  EncoderOptions encoder;
};

// floor(n_in / (1 - s)), nudged so ratios that are exact in decimal
// (8 / 0.1 = 80) are not lost to rounding.
unsigned auto_n_out(unsigned n_in, double s);

// Every matrix bit is set with probability `fill_probability`.
DecoderSpec sample_matrix(unsigned n_in, unsigned n_out, unsigned n_s, SplitMix64& rng,
                          double fill_probability = 0.5,
                          unsigned trellis_cap = kDefaultTrellisCap);

Calibration synthetic_calibration(std::size_t bits, double s, std::uint64_t seed);

// Encoding efficiency (percent) of `spec` on the calibration data.
double calibration_efficiency(const DecoderSpec& spec, const Calibration& calibration,
                              const EncoderOptions& options = {});

struct SearchResult {
  DecoderSpec spec;
  double e_calibration = 0.0;
  unsigned best_trial = 0;
  std::vector<double> trial_efficiency;
};

// Samples cfg.trials matrices (trial t uses derive_seed(seed, t)) and keeps
// the first one with the highest calibration efficiency.
SearchResult select_best(const SearchConfig& cfg, unsigned n_in, unsigned n_out, unsigned n_s);

}  // namespace f2f
