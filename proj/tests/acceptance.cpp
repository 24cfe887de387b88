// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).
//
//   f2f_acceptance [--fast]    --fast skips the n_s = 2 tier

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "f2f/codec.hpp"
#include "f2f/entropy.hpp"
#include "f2f/matrixsearch.hpp"
#include "f2f/spmv.hpp"
#include "f2f/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace f2f;

namespace {

// Tolerances, in percentage points unless noted.
constexpr double kTolNs0 = 1.5;
constexpr double kTolNs1 = 2.0;
constexpr double kTolNs2 = 2.5;
constexpr double kMinEfficiencyNs2 = 97.0;
constexpr double kEntropyTol = 0.01;
constexpr double kFloatRelTol = 1e-6;
constexpr double kSigmaBound = 4.0;

// Trial counts and data sizes per tier.
constexpr unsigned kTrials = 32;
constexpr unsigned kTrialsNs2 = 4;
constexpr std::size_t kBitsNs0 = 1'000'000;
constexpr std::size_t kBitsNs1 = 100'000;
constexpr std::size_t kBitsNs2 = 20'000;

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Cell {
  double e = 0;
  double save = 0;
};

// Best-of-N matrix selected by E on the plane being measured, then the exact
// footprint of that plane (`bits` random bits at sparsity s).
Cell measure(double s, unsigned n_in, unsigned n_out, unsigned n_s, std::size_t bits,
             unsigned trials, std::uint64_t seed) {
  Calibration data{gen_random_plane(bits, derive_seed(seed, 2)),
                   gen_bernoulli_mask(bits, s, derive_seed(seed, 3))};
  SearchConfig cfg;
  cfg.trials = trials;
  cfg.seed = derive_seed(seed, 1);
  cfg.calibration = data;
  const DecoderSpec spec = select_best(cfg, n_in, n_out, n_s).spec;

  BitPlaneSet set;
  set.planes.push_back(std::move(data.plane));
  set.mask = std::move(data.mask);
  const auto out = compress_planes(set, spec, CorrectionConfig{});
  const PlaneReport& r = out.reports.front();
  return Cell{efficiency_percent(r.unpruned_bits - r.error_bits, r.unpruned_bits),
              100.0 * (1.0 - double(r.footprint_bits) / double(bits))};
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome criterion1() {
  const double sparsity[] = {0.6, 0.7, 0.8, 0.9};
  const double target[] = {38.6, 53.8, 67.9, 83.5};
  Outcome o{true, ""};
  for (int i = 0; i < 4; ++i) {
    const unsigned n_out = auto_n_out(8, sparsity[i]);
    const Cell c = measure(sparsity[i], 8, n_out, 0, kBitsNs0, kTrials, derive_seed(kSeed, 100 + i));
    const bool ok = std::fabs(c.save - target[i]) <= kTolNs0;
    o.pass = o.pass && ok;
    o.detail += fmt("S=%.1f n_out=%u save=%.2f%% (target %.1f) E=%.2f%%; ", sparsity[i], n_out,
                    c.save, target[i], c.e);
  }
  return o;
}

Outcome criterion2() {
  const double sparsity[] = {0.9, 0.7};
  const double target[] = {88.5, 67.4};
  Outcome o{true, ""};
  for (int i = 0; i < 2; ++i) {
    const unsigned n_out = auto_n_out(8, sparsity[i]);
    const Cell c = measure(sparsity[i], 8, n_out, 1, kBitsNs1, kTrials, derive_seed(kSeed, 200 + i));
    const bool ok = std::fabs(c.save - target[i]) <= kTolNs1;
    o.pass = o.pass && ok;
    o.detail += fmt("S=%.1f n_out=%u save=%.2f%% (target %.1f) E=%.2f%%; ", sparsity[i], n_out,
                    c.save, target[i], c.e);
  }
  return o;
}

Outcome criterion3() {
  const Cell c = measure(0.9, 8, 80, 2, kBitsNs2, kTrialsNs2,
                         derive_seed(kSeed, 300));
  return {std::fabs(c.save - 89.3) <= kTolNs2,
          fmt("S=0.9 n_out=80 save=%.2f%% (target 89.3) E=%.2f%%", c.save, c.e)};
}

Outcome criterion4(bool slow) {
  const unsigned n_outs[] = {40, 80, 120};
  Outcome o{true, ""};
  for (unsigned n_s : {1u, 2u}) {
    if (n_s == 2 && !slow) continue;
    const std::size_t bits = n_s == 1 ? kBitsNs1 : kBitsNs2;
    const unsigned trials = n_s == 1 ? kTrials : kTrialsNs2;
    Cell cells[3];
    for (int i = 0; i < 3; ++i) {
      cells[i] = measure(0.9, 8, n_outs[i], n_s, bits, trials,
                         derive_seed(kSeed, 400 + 10 * n_s + i));
      o.detail += fmt("n_s=%u n_out=%u save=%.2f%% E=%.2f%%; ", n_s, n_outs[i], cells[i].save,
                      cells[i].e);
    }
    o.pass = o.pass && cells[1].save > cells[0].save && cells[1].save > cells[2].save;
    if (n_s == 2) {
      o.pass = o.pass && cells[0].e >= kMinEfficiencyNs2 && cells[1].e >= kMinEfficiencyNs2;
    }
  }
  if (!slow) o.detail += "n_s=2 tier skipped";
  return o;
}

Outcome criterion5() {
  const auto t1 = min_symbol_set(4, 1);
  const auto t2 = min_symbol_set(4, 2);
  const auto t3 = min_symbol_set(4, 3);
  const bool ok = t1.symbols.size() == 2 && t1.entropy_bits == 1.0 && t2.symbols.size() == 5 &&
                  std::fabs(t2.entropy_bits - 2.28) <= kEntropyTol && t3.symbols.size() == 8 &&
                  fixed_to_fixed_bits(t3) == 3;
  return {ok, fmt("(4,1): %zu symbols H=%.4f; (4,2): %zu symbols H=%.4f; (4,3): %zu symbols "
                  "%u bits",
                  t1.symbols.size(), t1.entropy_bits, t2.symbols.size(), t2.entropy_bits,
                  t3.symbols.size(), fixed_to_fixed_bits(t3))};
}

Outcome criterion6() {
  SplitMix64 rng(derive_seed(kSeed, 600));
  std::size_t failures = 0, cases = 1000;
  for (std::size_t c = 0; c < cases; ++c) {
    const unsigned n_in = 1 + rng.next() % 8;
    const unsigned n_s = rng.next() % 3;
    const unsigned n_out = n_in + rng.next() % (4 * n_in + 8);
    if (n_in * (n_s + 1) > 16) {
      --c;
      continue;
    }
    const DecoderSpec spec = testing::random_spec(n_in, n_out, n_s, rng);
    const unsigned bw = 1 + rng.next() % 16;
    const std::size_t count = 1 + rng.next() % 400;
    const TensorManifest manifest{{count}, bw};
    std::vector<std::uint8_t> raw(count * manifest.element_bytes());
    for (std::size_t e = 0; e < count; ++e) {
      const std::uint64_t v = rng.next() & ((std::uint64_t{1} << bw) - 1);
      for (std::size_t b = 0; b < manifest.element_bytes(); ++b) {
        raw[e * manifest.element_bytes() + b] = std::uint8_t(v >> (8 * b));
      }
    }
    const PackedBitVector mask = gen_bernoulli_mask(count, rng.uniform() * 0.95, rng.next());
    const CorrectionConfig cfg{(rng.next() & 1) ? 64u : 512u};
    const auto out = compress(raw, manifest, mask, spec, cfg);
    const auto restored = decompress(deserialize_artifact(serialize_artifact(out.artifact)));
    const auto a = group_bitplanes(raw, manifest, mask).planes;
    const auto b = group_bitplanes(restored, manifest, mask).planes;
    bool ok = true;
    for (std::size_t k = 0; k < a.size(); ++k) ok = ok && (a[k] & mask) == (b[k] & mask);
    failures += !ok;
  }
  return {failures == 0, fmt("%zu/%zu instances restored every unpruned bit", cases - failures,
                             cases)};
}

Outcome criterion7() {
  SplitMix64 rng(derive_seed(kSeed, 700));
  std::size_t mismatches = 0;
  const std::size_t cases = 500;
  for (std::size_t c = 0; c < cases; ++c) {
    const unsigned n_in = 1 + rng.next() % 4;
    const unsigned n_s = rng.next() % 3;
    const unsigned max_total = 20 / n_in;
    if (max_total < n_s + 1) {
      --c;
      continue;
    }
    const std::size_t l = 1 + rng.next() % (max_total - n_s);
    const unsigned n_out = 1 + rng.next() % 10;
    const DecoderSpec spec = testing::random_spec(n_in, n_out, n_s, rng);
    const auto blocks = testing::random_blocks(l, n_out, rng, rng.uniform());
    const auto dp = encode_sequential_dp(spec, blocks);
    const auto [best, stream] = oracle::exhaustive_encode(spec, blocks);
    mismatches += dp.total_errors != best;
  }
  return {mismatches == 0,
          fmt("%zu/%zu instances match exhaustive minimum", cases - mismatches, cases)};
}

Outcome criterion8() {
  SplitMix64 rng(derive_seed(kSeed, 800));
  std::size_t bad = 0;
  const std::size_t cases = 10'000;
  for (std::size_t c = 0; c < cases; ++c) {
    const unsigned n_in = 1 + rng.next() % 10;
    const unsigned n_s = rng.next() % (kMaxWindowBits / n_in);
    const unsigned n_out = 1 + rng.next() % 100;
    const DecoderSpec spec = testing::random_spec(n_in, n_out, n_s, rng);
    const std::uint32_t in_mask = n_in == 32 ? ~0u : (1u << n_in) - 1;
    std::vector<InputVector> a(n_s + 1), b(n_s + 1), ab(n_s + 1), zero(n_s + 1, 0);
    for (unsigned i = 0; i <= n_s; ++i) {
      a[i] = std::uint32_t(rng.next()) & in_mask;
      b[i] = std::uint32_t(rng.next()) & in_mask;
      ab[i] = a[i] ^ b[i];
    }
    auto lhs = decode_block(spec, ab);
    lhs ^= decode_block(spec, a);
    lhs ^= decode_block(spec, b);
    const bool ok = lhs.popcount() == 0 && decode_block(spec, zero).popcount() == 0 &&
                    decode_block(spec, a) == oracle::decode_block(spec, a);
    bad += !ok;
  }
  return {bad == 0, fmt("%zu/%zu (spec, window) pairs linear with zero map", cases - bad, cases)};
}

Outcome criterion9() {
  SplitMix64 rng(derive_seed(kSeed, 900));
  std::size_t bad = 0;
  const std::size_t cases = 100;
  const double sparsity[] = {0.5, 0.7, 0.9};
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t rows = 1 + rng.next() % 128, cols = 1 + rng.next() % 128;
    const double s = sparsity[c % 3];
    const DecoderSpec spec = testing::random_spec(8, auto_n_out(8, s), rng.next() % 2, rng);
    const PackedBitVector mask = gen_bernoulli_mask(rows * cols, s, rng.next());
    if (c % 2 == 0) {
      MaskedDense<std::int16_t> a{rows, cols, std::vector<std::int16_t>(rows * cols), mask};
      for (auto& v : a.values) v = std::int16_t(rng.next());
      std::vector<std::int16_t> x(cols);
      for (auto& v : x) v = std::int16_t(rng.next());
      const auto dense = spmv_dense_masked<std::int16_t>(a, x);
      const auto csr = spmv_csr<std::int16_t>(csr_from_dense(a), x);
      const auto dec = spmv_decoded<std::int16_t>(encode_rows(a, spec, CorrectionConfig{64}), x);
      bad += !(dense == csr && dense == dec);
    } else {
      MaskedDense<float> a{rows, cols, std::vector<float>(rows * cols), mask};
      for (auto& v : a.values) v = float(rng.uniform() * 2 - 1);
      std::vector<float> x(cols);
      for (auto& v : x) v = float(rng.uniform() * 2 - 1);
      const auto dense = spmv_dense_masked<float>(a, x);
      const auto csr = spmv_csr<float>(csr_from_dense(a), x);
      const auto dec = spmv_decoded<float>(encode_rows(a, spec, CorrectionConfig{64}), x);
      bool ok = true;
      for (std::size_t i = 0; i < rows; ++i) {
        const double tol = kFloatRelTol * std::max(1.0, double(std::fabs(dense[i])));
        ok = ok && std::fabs(csr[i] - dense[i]) <= tol && std::fabs(dec[i] - dense[i]) <= tol;
      }
      bad += !ok;
    }
  }
  return {bad == 0, fmt("%zu/%zu matrices agree on all three paths", cases - bad, cases)};
}

Outcome criterion10() {
  SplitMix64 rng(derive_seed(kSeed, 1000));
  std::size_t bad = 0;
  const std::size_t cases = 200;
  for (std::size_t c = 0; c < cases; ++c) {
    const unsigned n_in = 1 + rng.next() % 8;
    const unsigned n_s = rng.next() % 2;
    const unsigned n_out = n_in + rng.next() % 60;
    const DecoderSpec spec = testing::random_spec(n_in, n_out, n_s, rng);
    const std::size_t count = 1 + rng.next() % 2000;
    std::vector<std::uint8_t> raw(count);
    for (auto& v : raw) v = std::uint8_t(rng.next());
    const CorrectionConfig cfg{1u << (2 + rng.next() % 8)};
    const auto out = compress(raw, TensorManifest{{count}, 8},
                              gen_bernoulli_mask(count, rng.uniform() * 0.95, rng.next()), spec, cfg);
    std::vector<std::uint64_t> record_bits;
    serialize_artifact(out.artifact, &record_bits);
    const std::size_t l = (count + n_out - 1) / n_out;
    for (std::size_t k = 0; k < record_bits.size(); ++k) {
      const auto& p = out.artifact.planes[k];
      bad += record_bits[k] != exact_footprint(count, l, spec, p.correction, cfg);
    }
  }
  return {bad == 0, fmt("%zu plane records with serialized size != exact_footprint over %zu "
                        "artifacts",
                        bad, cases)};
}

Outcome criterion11() {
  const double s = 0.9;
  const std::size_t n_out = 80;
  const auto p = block_nu_stats(gen_bernoulli_mask(1'000'000, s, derive_seed(kSeed, 1100)), n_out);
  const double mean = n_out * (1 - s);
  const double var = n_out * s * (1 - s);
  const double cv = std::sqrt(s / (n_out * (1 - s)));
  const double blocks = double(p.blocks);
  const double mean_bound = kSigmaBound * std::sqrt(var / blocks);
  // Delta-method standard error of the sample CV for a binomial count.
  const double mu4 = var * (1 + 3 * (n_out - 2) * s * (1 - s));
  const double var_se = std::sqrt((mu4 - var * var) / blocks);
  const double cv_bound = kSigmaBound * (cv * (0.5 * var_se / var + std::sqrt(var / blocks) / mean));
  const bool stats_ok = std::fabs(p.mean - mean) <= mean_bound &&
                        std::fabs(p.coefficient_of_variation - cv) <= cv_bound &&
                        std::fabs(block_nu_cv_theory(n_out, s) - 0.335) < 0.001;
  bool closed_ok = csr_row_cv(9, 0.9) == 1.0;
  for (std::size_t n : {1, 9, 64, 1000}) {
    for (double sp : {0.1, 0.5, 0.9}) {
      closed_ok = closed_ok && csr_row_cv(n, sp) == (1.0 / std::sqrt(double(n))) * std::sqrt(sp / (1.0 - sp));
    }
  }
  return {stats_ok && closed_ok,
          fmt("mean=%.4f (8 +- %.4f) CV=%.4f (%.4f +- %.4f) csr_row_cv(9,0.9)=%.3f", p.mean,
              mean_bound, p.coefficient_of_variation, cv, cv_bound, csr_row_cv(9, 0.9))};
}

}  // namespace

int main(int argc, char** argv) {
  bool slow = F2F_ACCEPTANCE_SLOW;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) slow = false;
  }
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
    bool is_slow;
  };
  const std::vector<Entry> entries = {
      {1, "memory save n_s=0, 1M bits", criterion1, false},
      {2, "memory save n_s=1, 100K bits", criterion2, false},
      {3, "memory save n_s=2, 20K bits", criterion3, true},
      {4, "save peaks at n_out=80", [slow] { return criterion4(slow); }, false},
      {5, "minimum symbol sets", criterion5, false},
      {6, "lossless roundtrip", criterion6, false},
      {7, "trellis optimality vs exhaustive", criterion7, false},
      {8, "GF(2) linearity", criterion8, false},
      {9, "SpMV three-way equivalence", criterion9, false},
      {10, "footprint exactness", criterion10, false},
      {11, "sparsity statistics", criterion11, false},
  };
  int failed = 0;
  for (const auto& e : entries) {
    if (e.is_slow && !slow) {
      std::printf("SKIP  criterion %2d  %-34s slow tier disabled\n", e.id, e.name);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s  criterion %2d  %-34s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", e.id, e.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
