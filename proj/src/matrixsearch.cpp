#include "f2f/matrixsearch.hpp"

#include <cmath>

#include "f2f/codec.hpp"
#include "f2f/error.hpp"

namespace f2f {

namespace {
// Offsets keeping calibration streams apart from per-trial matrix streams.
constexpr std::uint64_t kCalibrationPlaneStream = 0x5EED'0000'0001ULL;
constexpr std::uint64_t kCalibrationMaskStream = 0x5EED'0000'0002ULL;
}  // namespace

unsigned auto_n_out(unsigned n_in, double s) {
  if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::invalid_parameter, "sparsity must be in [0, 1)");
  const double ratio = static_cast<double>(n_in) / (1.0 - s);
  return static_cast<unsigned>(std::floor(ratio + 1e-9 * ratio));
}

DecoderSpec sample_matrix(unsigned n_in, unsigned n_out, unsigned n_s, SplitMix64& rng,
                          double fill_probability, unsigned trellis_cap) {
  const unsigned width = (n_s + 1) * n_in;
  std::vector<PackedBitVector> rows(n_out, PackedBitVector(width));
  for (auto& row : rows) {
    for (unsigned c = 0; c < width; ++c) row.set(c, rng.uniform() < fill_probability);
  }
  return DecoderSpec(n_in, n_out, n_s, std::move(rows), trellis_cap);
}

Calibration synthetic_calibration(std::size_t bits, double s, std::uint64_t seed) {
  return Calibration{
      .plane = gen_random_plane(bits, derive_seed(seed, kCalibrationPlaneStream)),
      .mask = gen_bernoulli_mask(bits, s, derive_seed(seed, kCalibrationMaskStream)),
  };
}

double calibration_efficiency(const DecoderSpec& spec, const Calibration& calibration,
                              const EncoderOptions& options) {
  const EncodeResult result = encode_plane(spec, calibration.plane, calibration.mask, options);
  const std::uint64_t live = calibration.mask.popcount();
  return efficiency_percent(live - result.total_errors, live);
}

SearchResult select_best(const SearchConfig& cfg, unsigned n_in, unsigned n_out, unsigned n_s) {
  if (cfg.trials == 0) fail(ErrorKind::invalid_parameter, "trials must be >= 1");
  const Calibration calibration =
      cfg.calibration ? *cfg.calibration
                      : synthetic_calibration(cfg.synthetic_bits, cfg.synthetic_s, cfg.seed);

  std::optional<SearchResult> best;
  std::vector<double> efficiencies;
  efficiencies.reserve(cfg.trials);
  for (unsigned t = 0; t < cfg.trials; ++t) {
    SplitMix64 rng(derive_seed(cfg.seed, t));
    DecoderSpec spec =
        sample_matrix(n_in, n_out, n_s, rng, cfg.fill_probability, cfg.encoder.trellis_cap);
    const double e = calibration_efficiency(spec, calibration, cfg.encoder);
    efficiencies.push_back(e);
    if (!best || e > best->e_calibration) {
      best = SearchResult{std::move(spec), e, t, {}};
    }
  }
  best->trial_efficiency = std::move(efficiencies);
  return std::move(*best);
}

}  // namespace f2f
