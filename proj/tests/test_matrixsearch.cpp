#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "f2f/error.hpp"
#include "f2f/matrixsearch.hpp"

using namespace f2f;

namespace {

std::size_t matrix_popcount(const DecoderSpec& spec) {
  std::size_t n = 0;
  for (const auto& r : spec.rows()) n += r.popcount();
  return n;
}

}  // namespace

TEST(SampleMatrix, DeterministicPerSeed) {
  SplitMix64 a(42), b(42), c(43);
  const auto ma = sample_matrix(8, 80, 1, a);
  EXPECT_EQ(ma, sample_matrix(8, 80, 1, b));
  EXPECT_NE(ma, sample_matrix(8, 80, 1, c));
}

TEST(SampleMatrix, Dimensions) {
  SplitMix64 rng(1);
  const auto m = sample_matrix(8, 80, 0, rng);
  EXPECT_EQ(m.rows().size() * m.window_bits(), 640u);
  const auto m2 = sample_matrix(8, 80, 2, rng);
  EXPECT_EQ(m2.window_bits(), 24u);
}

TEST(SampleMatrix, PopcountIsBinomial) {
  const unsigned n_in = 8, n_out = 40, n_s = 1;
  const double bits = double(n_in) * n_out * (n_s + 1);
  SplitMix64 rng(7);
  double sum = 0;
  const int samples = 100;
  for (int i = 0; i < samples; ++i) sum += double(matrix_popcount(sample_matrix(n_in, n_out, n_s, rng)));
  const double mean = sum / samples;
  const double sigma_of_mean = std::sqrt(bits * 0.25 / samples);
  EXPECT_NEAR(mean, bits / 2, 3 * sigma_of_mean);
}

TEST(SampleMatrix, FillProbabilityRespected) {
  SplitMix64 rng(3);
  EXPECT_EQ(matrix_popcount(sample_matrix(4, 10, 0, rng, 0.0)), 0u);
  EXPECT_EQ(matrix_popcount(sample_matrix(4, 10, 0, rng, 1.0)), 40u);
}

TEST(SelectBest, SingleTrialReturnsThatMatrix) {
  SearchConfig cfg;
  cfg.trials = 1;
  cfg.seed = 99;
  cfg.synthetic_bits = 4000;
  const auto r = select_best(cfg, 8, 40, 0);
  SplitMix64 rng(derive_seed(99, 0));
  EXPECT_EQ(r.spec, sample_matrix(8, 40, 0, rng));
  EXPECT_EQ(r.best_trial, 0u);
  ASSERT_EQ(r.trial_efficiency.size(), 1u);
  EXPECT_DOUBLE_EQ(r.e_calibration, r.trial_efficiency[0]);
}

TEST(SelectBest, MaximumAndDeterminism) {
  SearchConfig cfg;
  cfg.trials = 8;
  cfg.seed = 5;
  cfg.synthetic_bits = 8000;
  cfg.synthetic_s = 0.8;
  const auto a = select_best(cfg, 8, 40, 0);
  const auto b = select_best(cfg, 8, 40, 0);
  EXPECT_EQ(a.spec, b.spec);
  EXPECT_EQ(a.trial_efficiency, b.trial_efficiency);
  for (double e : a.trial_efficiency) EXPECT_GE(a.e_calibration, e);
  EXPECT_DOUBLE_EQ(a.trial_efficiency[a.best_trial], a.e_calibration);
  const auto first = std::find(a.trial_efficiency.begin(), a.trial_efficiency.end(), a.e_calibration);
  EXPECT_EQ(std::size_t(first - a.trial_efficiency.begin()), a.best_trial);
  EXPECT_DOUBLE_EQ(calibration_efficiency(a.spec, synthetic_calibration(8000, 0.8, 5)),
                   a.e_calibration);
}

TEST(SelectBest, ZeroTrialsRejected) {
  SearchConfig cfg;
  cfg.trials = 0;
  EXPECT_ANY_THROW(select_best(cfg, 8, 40, 0));
}

TEST(SelectBest, WinnerGeneralizesToHeldOutData) {
  const unsigned n_in = 8, n_out = 40, trials = 9, repeats = 10;
  unsigned wins = 0;
  for (unsigned rep = 0; rep < repeats; ++rep) {
    SearchConfig cfg;
    cfg.trials = trials;
    cfg.seed = derive_seed(1000, rep);
    cfg.synthetic_bits = 20000;
    cfg.synthetic_s = 0.8;
    const auto best = select_best(cfg, n_in, n_out, 0);
    const auto held_out = synthetic_calibration(20000, 0.8, derive_seed(2000, rep));
    std::vector<double> held;
    for (unsigned t = 0; t < trials; ++t) {
      SplitMix64 rng(derive_seed(cfg.seed, t));
      held.push_back(calibration_efficiency(sample_matrix(n_in, n_out, 0, rng), held_out));
    }
    std::nth_element(held.begin(), held.begin() + trials / 2, held.end());
    if (calibration_efficiency(best.spec, held_out) >= held[trials / 2]) ++wins;
  }
  EXPECT_GE(wins, 8u);
}

TEST(AutoNOut, FloorOfRatio) {
  EXPECT_EQ(auto_n_out(8, 0.6), 20u);
  EXPECT_EQ(auto_n_out(8, 0.7), 26u);
  EXPECT_EQ(auto_n_out(8, 0.8), 40u);
  EXPECT_EQ(auto_n_out(8, 0.9), 80u);
  EXPECT_EQ(auto_n_out(8, 0.0), 8u);
  EXPECT_THROW(auto_n_out(8, 1.0), Error);
}
