// f2fx: command-line front end for the fixed-to-fixed weight codec.
//
// Exit codes: 0 success, 2 verification failure, 3 malformed input, invalid
// parameters or a corrupt artifact, 4 resource cap exceeded. Errors are
// printed to stderr as {"error": <kind>, "message": <text>}.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "f2f/codec.hpp"
#include "f2f/entropy.hpp"
#include "f2f/error.hpp"
#include "f2f/matrixsearch.hpp"
#include "f2f/spmv.hpp"
#include "f2f/synth.hpp"
#include "f2f/weight_dump.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace f2f;

namespace {

constexpr int kExitVerify = 2;
constexpr int kExitInput = 3;
constexpr int kExitCap = 4;

// Seed streams shared by gen, sweep and on-the-fly matrix design so a sweep
// cell can be reproduced with gen + compress.
constexpr std::uint64_t kMaskStream = 0;
constexpr std::uint64_t kPlaneStream = 1;  // plane k uses kPlaneStream + k
constexpr std::uint64_t kMatrixStream = 0x4D41'5452'4958ULL;

int exit_code(ErrorKind kind) {
  return kind == ErrorKind::resource_limit ? kExitCap : kExitInput;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorKind::malformed_input, "cannot write " + path.string());
}

json spec_json(const DecoderSpec& spec) {
  return {{"n_in", spec.n_in()}, {"n_out", spec.n_out()}, {"n_s", spec.n_s()}};
}

std::vector<std::uint8_t> synthetic_weights(const TensorManifest& manifest, std::uint64_t seed) {
  const std::size_t count = manifest.element_count();
  std::vector<PackedBitVector> planes;
  for (unsigned k = 0; k < manifest.bit_width; ++k) {
    planes.push_back(gen_random_plane(count, derive_seed(seed, kPlaneStream + k)));
  }
  return ungroup_bitplanes(planes, manifest);
}

PackedBitVector synthetic_mask(std::size_t count, double s, std::uint64_t seed) {
  return gen_bernoulli_mask(count, s, derive_seed(seed, kMaskStream));
}

// ---- matrix options shared by design-matrix, compress and sweep ----------

struct DesignFlags {
  unsigned n_in = 8;
  std::string n_out = "auto";
  unsigned n_s = 0;
  unsigned trials = 32;
  std::uint64_t seed = 1;
  std::size_t calib_bits = 50'000;
  double calib_sparsity = -1;  // < 0: use the data's sparsity
  unsigned trellis_cap = kDefaultTrellisCap;

  void add(CLI::App* cmd) {
    cmd->add_option("--n-in", n_in, "input bits per vector")->capture_default_str();
    cmd->add_option("--n-out", n_out, "output bits per block, or 'auto'")->capture_default_str();
    cmd->add_option("--n-s", n_s, "shift-register depth")->capture_default_str();
    cmd->add_option("--trials", trials, "random matrices to try")->capture_default_str();
    cmd->add_option("--seed", seed, "seed")->capture_default_str();
    cmd->add_option("--calib-bits", calib_bits, "synthetic calibration bits")->capture_default_str();
    cmd->add_option("--calib-sparsity", calib_sparsity, "calibration sparsity (default: data's)");
    cmd->add_option("--trellis-cap", trellis_cap, "max trellis window bits n_in*(n_s+1)")
        ->capture_default_str();
  }

  unsigned resolve_n_out(double s) const {
    if (n_out == "auto") return auto_n_out(n_in, s);
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(n_out, &used);
      if (used == n_out.size() && v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    fail(ErrorKind::invalid_parameter, "--n-out must be a positive integer or 'auto'");
  }

  SearchResult design(double s, std::optional<Calibration> calibration = {}) const {
    SearchConfig cfg;
    cfg.trials = trials;
    cfg.seed = derive_seed(seed, kMatrixStream);
    cfg.calibration = std::move(calibration);
    cfg.synthetic_bits = calib_bits;
    cfg.synthetic_s = calib_sparsity >= 0 ? calib_sparsity : s;
    cfg.encoder.trellis_cap = trellis_cap;
    return select_best(cfg, n_in, resolve_n_out(s), n_s);
  }
};

double mask_sparsity(const PackedBitVector& mask) {
  if (mask.empty()) return 0.0;
  return 1.0 - static_cast<double>(mask.popcount()) / static_cast<double>(mask.size());
}

// All planes of a weight dump laid end to end, with the mask repeated.
Calibration dump_calibration(const WeightDump& dump) {
  const BitPlaneSet set = group_bitplanes(dump.weights, dump.manifest, dump.mask);
  Calibration c;
  for (const auto& p : set.planes) {
    c.plane.append(p);
    c.mask.append(dump.mask);
  }
  return c;
}

// ---- gen ----------------------------------------------------------------

struct GenFlags {
  std::optional<std::size_t> bits;
  std::vector<std::size_t> shape;
  unsigned bit_width = 8;
  double sparsity = 0.9;
  std::uint64_t seed = 1;
  std::string out = "weights";
};

int cmd_gen(const GenFlags& f) {
  TensorManifest manifest;
  if (f.bits) {
    manifest = TensorManifest{{*f.bits}, 1};
  } else if (!f.shape.empty()) {
    manifest = TensorManifest{f.shape, f.bit_width};
  } else {
    fail(ErrorKind::invalid_parameter, "gen needs --bits or --shape");
  }
  manifest.validate();
  const auto weights = synthetic_weights(manifest, f.seed);
  const auto mask = synthetic_mask(manifest.element_count(), f.sparsity, f.seed);
  const fs::path manifest_path = save_weight_dump(f.out, manifest, weights, mask);
  print_json({{"manifest", manifest_path.string()},
              {"shape", manifest.shape},
              {"bit_width", manifest.bit_width},
              {"sparsity", f.sparsity},
              {"s_observed", mask_sparsity(mask)},
              {"seed", f.seed}});
  return 0;
}

// ---- design-matrix ---------------------------------------------------------

struct DesignMatrixFlags {
  DesignFlags design;
  double sparsity = 0.9;
  std::string input;
  std::string out = "matrix.xmtx";
};

int cmd_design_matrix(const DesignMatrixFlags& f) {
  std::optional<Calibration> calibration;
  double s = f.sparsity;
  if (!f.input.empty()) {
    const WeightDump dump = load_weight_dump(f.input);
    s = mask_sparsity(dump.mask);
    calibration = dump_calibration(dump);
  }
  const SearchResult r = f.design.design(s, calibration);
  write_file(f.out, write_matrix_blob(r.spec));
  json sidecar = spec_json(r.spec);
  sidecar["seed"] = f.design.seed;
  sidecar["trials"] = f.design.trials;
  sidecar["E_calibration"] = r.e_calibration;
  sidecar["best_trial"] = r.best_trial;
  sidecar["trial_efficiency"] = r.trial_efficiency;
  sidecar["calibration"] = f.input.empty() ? json{{"synthetic_bits", f.design.calib_bits},
                                                  {"sparsity", s}}
                                           : json{{"manifest", f.input}};
  write_text(f.out + ".json", sidecar.dump(2) + "\n");
  sidecar["matrix"] = f.out;
  print_json(sidecar);
  return 0;
}

// ---- compress / decompress / verify ---------------------------------------

struct CompressFlags {
  DesignFlags design;
  std::string input;
  std::string weights;
  std::string matrix;
  std::uint32_t p = 512;
  std::string mask_storage = "reference";
  std::string out = "weights.f2fx";
  std::string report;
};

int cmd_compress(const CompressFlags& f) {
  const WeightDump dump =
      load_weight_dump(f.input, f.weights.empty() ? std::nullopt
                                                  : std::optional<fs::path>(f.weights));
  const double s = mask_sparsity(dump.mask);
  const auto t0 = std::chrono::steady_clock::now();

  json matrix_info;
  DecoderSpec spec = [&] {
    if (!f.matrix.empty()) {
      matrix_info = {{"matrix", f.matrix}};
      return read_matrix_blob(read_file(f.matrix), f.design.trellis_cap);
    }
    SearchResult r = f.design.design(s);
    matrix_info = {{"seed", f.design.seed},
                   {"trials", f.design.trials},
                   {"E_calibration", r.e_calibration}};
    return std::move(r.spec);
  }();

  CompressOptions options;
  options.encoder.trellis_cap = f.design.trellis_cap;
  options.mask_storage =
      f.mask_storage == "verbatim" ? MaskStorage::verbatim : MaskStorage::reference;
  options.mask_path = dump.mask_path.string();
  const CompressOutput out =
      compress(dump.weights, dump.manifest, dump.mask, spec, CorrectionConfig{f.p}, options);
  write_file(f.out, serialize_artifact(out.artifact));

  json j = out.report.to_json();
  j["artifact"] = f.out;
  j["decoder"] = spec_json(spec);
  j["decoder"].update(matrix_info);
  j["p"] = f.p;
  j["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!f.report.empty()) write_text(f.report, j.dump(2) + "\n");
  print_json(j);
  return 0;
}

int cmd_decompress(const std::string& artifact_path, const std::string& out) {
  const EncodedArtifact artifact = deserialize_artifact(read_file(artifact_path));
  const auto weights = decompress(artifact);
  write_file(out, weights);
  print_json({{"weights", out},
              {"shape", artifact.header.manifest.shape},
              {"bit_width", artifact.header.manifest.bit_width},
              {"bytes", weights.size()}});
  return 0;
}

int cmd_verify(const std::string& artifact_path, const std::string& input,
               const std::string& weights) {
  const EncodedArtifact artifact = deserialize_artifact(read_file(artifact_path));
  const WeightDump dump =
      load_weight_dump(input, weights.empty() ? std::nullopt : std::optional<fs::path>(weights));
  json j{{"artifact", artifact_path}, {"input", input}};
  auto verdict = [&](bool ok, const std::string& reason) {
    j["lossless"] = ok;
    if (!ok) j["reason"] = reason;
    print_json(j);
    return ok ? 0 : kExitVerify;
  };
  if (artifact.header.manifest.shape != dump.manifest.shape ||
      artifact.header.manifest.bit_width != dump.manifest.bit_width) {
    return verdict(false, "manifest mismatch");
  }
  if (sha256_hex(dump.mask.to_bytes()) != artifact.header.mask.sha256) {
    return verdict(false, "mask digest mismatch");
  }
  const auto restored = decompress(artifact);
  const auto a = group_bitplanes(dump.weights, dump.manifest, dump.mask).planes;
  const auto b = group_bitplanes(restored, dump.manifest, dump.mask).planes;
  std::uint64_t wrong = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    PackedBitVector diff = a[k];
    diff ^= b[k];
    diff &= dump.mask;
    wrong += diff.popcount();
  }
  j["mismatched_bits"] = wrong;
  return verdict(wrong == 0, "unpruned bits differ");
}

// ---- sweep ----------------------------------------------------------------

struct SweepFlags {
  std::vector<double> sparsity{0.9};
  std::vector<unsigned> n_in{8};
  std::vector<std::string> n_out{"auto"};
  std::vector<unsigned> n_s{0};
  std::size_t bits = 100'000;
  std::uint64_t seed = 1;
  unsigned trials = 32;
  std::size_t calib_bits = 50'000;
  std::uint32_t p = 512;
  unsigned trellis_cap = kDefaultTrellisCap;
  bool no_timing = false;
  std::string out;
  std::string svg;
};

struct SweepRow {
  double s;
  unsigned n_in, n_out, n_s;
  std::optional<EfficiencyReport> report;
  std::string status = "ok";
  double wall_time = 0;
};

std::string svg_plot(const std::vector<SweepRow>& rows) {
  // One polyline per (S, n_in, n_s) series: exact memory save (%) against n_out.
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Series> series;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& r : rows) {
    if (!r.report) continue;
    std::ostringstream label;
    label << "S=" << r.s << " n_in=" << r.n_in << " n_s=" << r.n_s;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == label.str(); });
    if (it == series.end()) it = series.insert(series.end(), Series{label.str(), {}});
    const double y = 100.0 * r.report->exact_memory_save;
    it->points.emplace_back(r.n_out, y);
    x_min = std::min(x_min, double(r.n_out));
    x_max = std::max(x_max, double(r.n_out));
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  const double w = 640, h = 400, m = 50;
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;
  auto px = [&](double x) { return m + (x - x_min) / (x_max - x_min) * (w - 2 * m); };
  auto py = [&](double y) { return h - m - (y - y_min) / (y_max - y_min) * (h - 2 * m); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">n_out</text>\n"
      << "<text x=\"12\" y=\"" << h / 2 << "\" transform=\"rotate(-90 12 " << h / 2
      << ")\" text-anchor=\"middle\">exact memory save (%)</text>\n"
      << "<text x=\"" << m << "\" y=\"" << h - m + 15 << "\">" << x_min << "</text>\n"
      << "<text x=\"" << w - m << "\" y=\"" << h - m + 15 << "\" text-anchor=\"end\">" << x_max
      << "</text>\n"
      << "<text x=\"" << m - 4 << "\" y=\"" << h - m << "\" text-anchor=\"end\">" << y_min
      << "</text>\n"
      << "<text x=\"" << m - 4 << "\" y=\"" << m + 4 << "\" text-anchor=\"end\">" << y_max
      << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* c = colors[i % std::size(colors)];
    svg << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
    for (const auto& [x, y] : series[i].points) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : series[i].points) {
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << c
          << "\"/>\n";
    }
    svg << "<text x=\"" << w - m - 150 << "\" y=\"" << m + 14 * i << "\" fill=\"" << c << "\">"
        << series[i].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

int cmd_sweep(const SweepFlags& f) {
  std::vector<SweepRow> rows;
  for (double s : f.sparsity) {
    const PackedBitVector plane = gen_random_plane(f.bits, derive_seed(f.seed, kPlaneStream));
    const PackedBitVector mask = synthetic_mask(f.bits, s, f.seed);
    std::vector<std::uint8_t> raw(f.bits);
    for (std::size_t i = 0; i < f.bits; ++i) raw[i] = plane.get(i);
    for (unsigned n_in : f.n_in) {
      for (const std::string& n_out_flag : f.n_out) {
        for (unsigned n_s : f.n_s) {
          DesignFlags d;
          d.n_in = n_in;
          d.n_out = n_out_flag;
          d.n_s = n_s;
          d.trials = f.trials;
          d.seed = f.seed;
          d.calib_bits = f.calib_bits;
          d.trellis_cap = f.trellis_cap;
          SweepRow row{s, n_in, 0, n_s, std::nullopt};
          const auto t0 = std::chrono::steady_clock::now();
          try {
            row.n_out = d.resolve_n_out(s);
            const DecoderSpec spec = d.design(s).spec;
            CompressOptions options;
            options.encoder.trellis_cap = f.trellis_cap;
            row.report = compress(raw, TensorManifest{{f.bits}, 1}, mask, spec,
                                  CorrectionConfig{f.p}, options)
                             .report;
          } catch (const Error& e) {
            row.status = to_string(e.kind());
            std::cerr << json{{"cell", {{"S", s}, {"n_in", n_in}, {"n_out", n_out_flag},
                                        {"n_s", n_s}}},
                              {"error", to_string(e.kind())},
                              {"message", e.what()}}
                             .dump()
                      << '\n';
          }
          row.wall_time =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          rows.push_back(std::move(row));
        }
      }
    }
  }

  std::ostringstream csv;
  csv << "S,n_in,n_out,n_s,E,encoded_bits,error_bits,exact_memory_save,analytic_memory_save,"
         "wall_time,status\n";
  for (const auto& r : rows) {
    csv << r.s << ',' << r.n_in << ',' << r.n_out << ',' << r.n_s << ',';
    if (r.report) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%.6f,%llu,%llu,%.6f,%.6f,", r.report->efficiency_percent,
                    static_cast<unsigned long long>(r.report->encoded_bits),
                    static_cast<unsigned long long>(r.report->error_bits),
                    r.report->exact_memory_save, r.report->analytic_memory_save);
      csv << buf;
    } else {
      csv << ",,,,,";
    }
    if (!f.no_timing) csv << r.wall_time;
    csv << ',' << r.status << '\n';
  }
  if (f.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text(f.out, csv.str());
  }
  if (!f.svg.empty()) write_text(f.svg, svg_plot(rows));
  return 0;
}

// ---- entropy / stats / cost ------------------------------------------------

int cmd_entropy(unsigned n_b, unsigned n_u, std::uint64_t node_budget) {
  const SymbolTable t = min_symbol_set(n_b, n_u, SymbolSearchOptions{node_budget});
  json j = t.to_json();
  j["fixed_to_fixed_bits"] = fixed_to_fixed_bits(t);
  print_json(j);
  return 0;
}

struct StatsFlags {
  std::string input;
  std::size_t bits = 1'000'000;
  double sparsity = 0.9;
  std::uint64_t seed = 1;
  std::size_t n_out = 80;
  std::optional<std::size_t> row_length;
};

int cmd_stats(const StatsFlags& f) {
  PackedBitVector mask;
  json source;
  if (!f.input.empty()) {
    mask = load_weight_dump(f.input).mask;
    source = {{"manifest", f.input}};
  } else {
    mask = synthetic_mask(f.bits, f.sparsity, f.seed);
    source = {{"bits", f.bits}, {"sparsity", f.sparsity}, {"seed", f.seed}};
  }
  const SparsityProfile p = block_nu_stats(mask, f.n_out);
  json j{{"source", source},
         {"n_out", f.n_out},
         {"S", p.s},
         {"blocks", p.blocks},
         {"mean_nu", p.mean},
         {"variance_nu", p.variance},
         {"cv_nu", p.coefficient_of_variation}};
  if (p.s < 1.0) {
    j["cv_nu_theory"] = block_nu_cv_theory(f.n_out, p.s);
  }
  if (f.row_length && p.s > 0.0 && p.s < 1.0) {
    j["csr_row_cv"] = csr_row_cv(*f.row_length, p.s);
    j["fixed_to_fixed_row_cv"] = 0.0;
  }
  print_json(j);
  return 0;
}

int cmd_cost(const std::string& matrix, unsigned n_in, unsigned n_out, unsigned n_s) {
  HardwareCost c;
  json j;
  if (!matrix.empty()) {
    const DecoderSpec spec = read_matrix_blob(read_file(matrix), kMaxWindowBits);
    c = hardware_cost(spec);
    j = spec_json(spec);
  } else {
    c = hardware_cost(n_in, n_out, n_s);
    j = {{"n_in", n_in}, {"n_out", n_out}, {"n_s", n_s}};
  }
  j["xor_gates"] = c.xor_gates;
  j["transistors"] = c.transistors;
  j["extra_latency_cycles"] = c.extra_latency_cycles;
  print_json(j);
  return 0;
}

// ---- spmv-bench ------------------------------------------------------------

struct SpmvFlags {
  std::size_t rows = 256;
  std::size_t cols = 256;
  double sparsity = 0.9;
  unsigned repeat = 10;
  std::uint64_t seed = 1;
  unsigned n_in = 8;
  unsigned n_s = 0;
  std::string type = "int16";
  bool csv = false;
};

template <class T>
int run_spmv_bench(const SpmvFlags& f) {
  SplitMix64 rng(derive_seed(f.seed, 0));
  MaskedDense<T> a{f.rows, f.cols, std::vector<T>(f.rows * f.cols),
                   synthetic_mask(f.rows * f.cols, f.sparsity, f.seed)};
  std::vector<T> x(f.cols);
  auto draw = [&] {
    if constexpr (std::is_integral_v<T>) return static_cast<T>(rng.next());
    else return static_cast<T>(rng.uniform() * 2 - 1);
  };
  for (auto& v : a.values) v = draw();
  for (auto& v : x) v = draw();

  SplitMix64 mrng(derive_seed(f.seed, kMatrixStream));
  const DecoderSpec spec = sample_matrix(f.n_in, auto_n_out(f.n_in, f.sparsity), f.n_s, mrng);
  const CsrMatrix<T> csr = csr_from_dense(a);
  const EncodedRowMatrix<T> enc = encode_rows(a, spec, CorrectionConfig{});

  using Clock = std::chrono::steady_clock;
  auto time = [&](auto&& fn) {
    std::vector<Accumulator<T>> y;
    const auto t0 = Clock::now();
    for (unsigned r = 0; r < f.repeat; ++r) y = fn();
    return std::pair{y, std::chrono::duration<double>(Clock::now() - t0).count() /
                            std::max(1u, f.repeat)};
  };
  const auto [y_dense, t_dense] = time([&] { return spmv_dense_masked<T>(a, x); });
  const auto [y_csr, t_csr] = time([&] { return spmv_csr<T>(csr, x); });
  const auto [y_dec, t_dec] = time([&] { return spmv_decoded<T>(enc, x); });

  bool equivalent = true;
  for (std::size_t i = 0; i < f.rows; ++i) {
    if constexpr (std::is_integral_v<T>) {
      equivalent = equivalent && y_dense[i] == y_csr[i] && y_dense[i] == y_dec[i];
    } else {
      const double tol = 1e-6 * std::max(1.0, double(std::fabs(y_dense[i])));
      equivalent = equivalent && std::fabs(y_csr[i] - y_dense[i]) <= tol &&
                   std::fabs(y_dec[i] - y_dense[i]) <= tol;
    }
  }
  if (f.csv) {
    std::cout << "rows,cols,sparsity,type,equivalent,dense_s,csr_s,decoded_s\n"
              << f.rows << ',' << f.cols << ',' << f.sparsity << ',' << f.type << ','
              << (equivalent ? "true" : "false") << ',' << t_dense << ',' << t_csr << ','
              << t_dec << '\n';
  } else {
    print_json({{"rows", f.rows},
                {"cols", f.cols},
                {"sparsity", f.sparsity},
                {"type", f.type},
                {"decoder", spec_json(spec)},
                {"repeat", f.repeat},
                {"equivalent", equivalent},
                {"seconds_per_multiply",
                 {{"dense_masked", t_dense}, {"csr", t_csr}, {"decoded", t_dec}}}});
  }
  return equivalent ? 0 : kExitVerify;
}

int cmd_spmv_bench(const SpmvFlags& f) {
  if (f.type == "int8") return run_spmv_bench<std::int8_t>(f);
  if (f.type == "int16") return run_spmv_bench<std::int16_t>(f);
  if (f.type == "int32") return run_spmv_bench<std::int32_t>(f);
  if (f.type == "float") return run_spmv_bench<float>(f);
  fail(ErrorKind::invalid_parameter, "--type must be int8, int16, int32 or float");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-to-fixed XOR-gate codec for pruned weights"};
  app.require_subcommand(1);
  std::function<int()> action;

  GenFlags gen;
  auto* c_gen = app.add_subcommand("gen", "generate random weights and a Bernoulli mask");
  c_gen->add_option("--bits", gen.bits, "single-plane tensor of this many 1-bit weights");
  c_gen->add_option("--shape", gen.shape, "tensor shape")->excludes("--bits");
  c_gen->add_option("--bit-width", gen.bit_width, "bits per weight")->capture_default_str();
  c_gen->add_option("--sparsity", gen.sparsity, "pruning rate S")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "seed")->capture_default_str();
  c_gen->add_option("--out", gen.out, "output stem")->capture_default_str();
  c_gen->callback([&] { action = [&] { return cmd_gen(gen); }; });

  DesignMatrixFlags dm;
  auto* c_dm = app.add_subcommand("design-matrix", "pick the best of N random decoder matrices");
  dm.design.add(c_dm);
  c_dm->add_option("--sparsity", dm.sparsity, "sparsity for auto n_out and calibration")
      ->capture_default_str();
  c_dm->add_option("--input", dm.input, "calibrate on a weight manifest instead");
  c_dm->add_option("--out", dm.out, "matrix blob path")->capture_default_str();
  c_dm->callback([&] { action = [&] { return cmd_design_matrix(dm); }; });

  CompressFlags cf;
  auto* c_comp = app.add_subcommand("compress", "encode a weight dump into an artifact");
  cf.design.add(c_comp);
  c_comp->add_option("--input", cf.input, "weight manifest (JSON)")->required();
  c_comp->add_option("--weights", cf.weights, "override the manifest's weights file");
  c_comp->add_option("--matrix", cf.matrix, "decoder matrix blob (otherwise designed here)");
  c_comp->add_option("-p,--p", cf.p, "correction window bits")->capture_default_str();
  c_comp->add_option("--mask-storage", cf.mask_storage, "reference or verbatim")
      ->check(CLI::IsMember({"reference", "verbatim"}))
      ->capture_default_str();
  c_comp->add_option("--out", cf.out, "artifact path")->capture_default_str();
  c_comp->add_option("--report", cf.report, "also write the JSON report here");
  c_comp->callback([&] { action = [&] { return cmd_compress(cf); }; });

  std::string d_artifact, d_out = "restored.bin";
  auto* c_dec = app.add_subcommand("decompress", "restore raw weights from an artifact");
  c_dec->add_option("--artifact", d_artifact, "artifact path")->required();
  c_dec->add_option("--out", d_out, "raw weights output")->capture_default_str();
  c_dec->callback([&] { action = [&] { return cmd_decompress(d_artifact, d_out); }; });

  std::string v_artifact, v_input, v_weights;
  auto* c_ver = app.add_subcommand("verify", "check an artifact against the original dump");
  c_ver->add_option("--artifact", v_artifact, "artifact path")->required();
  c_ver->add_option("--input", v_input, "original weight manifest")->required();
  c_ver->add_option("--weights", v_weights, "override the manifest's weights file");
  c_ver->callback([&] { action = [&] { return cmd_verify(v_artifact, v_input, v_weights); }; });

  SweepFlags sw;
  auto* c_sw = app.add_subcommand("sweep", "grid of synthetic compress runs, CSV output");
  c_sw->add_option("--sparsity", sw.sparsity, "S values")->delimiter(',')->capture_default_str();
  c_sw->add_option("--n-in", sw.n_in, "n_in values")->delimiter(',')->capture_default_str();
  c_sw->add_option("--n-out", sw.n_out, "n_out values or 'auto'")
      ->delimiter(',')
      ->capture_default_str();
  c_sw->add_option("--n-s", sw.n_s, "n_s values")->delimiter(',')->capture_default_str();
  c_sw->add_option("--bits", sw.bits, "synthetic bits per cell")->capture_default_str();
  c_sw->add_option("--seed", sw.seed, "seed")->capture_default_str();
  c_sw->add_option("--trials", sw.trials, "random matrices per cell")->capture_default_str();
  c_sw->add_option("--calib-bits", sw.calib_bits, "calibration bits")->capture_default_str();
  c_sw->add_option("-p,--p", sw.p, "correction window bits")->capture_default_str();
  c_sw->add_option("--trellis-cap", sw.trellis_cap, "max trellis window bits")
      ->capture_default_str();
  c_sw->add_flag("--no-timing", sw.no_timing, "leave wall_time empty (byte-stable CSV)");
  c_sw->add_option("--out", sw.out, "CSV path (default stdout)");
  c_sw->add_option("--svg", sw.svg, "also plot memory save vs n_out");
  c_sw->callback([&] { action = [&] { return cmd_sweep(sw); }; });

  unsigned e_nb = 4, e_nu = 2;
  std::uint64_t e_budget = SymbolSearchOptions{}.node_budget;
  auto* c_ent = app.add_subcommand("entropy", "minimum symbol set for masked n_b-bit blocks");
  c_ent->add_option("--nb", e_nb, "block bits")->capture_default_str();
  c_ent->add_option("--nu", e_nu, "unpruned bits per block")->capture_default_str();
  c_ent->add_option("--node-budget", e_budget, "cover search budget")->capture_default_str();
  c_ent->callback([&] { action = [&] { return cmd_entropy(e_nb, e_nu, e_budget); }; });

  StatsFlags st;
  auto* c_st = app.add_subcommand("stats", "per-block unpruned-count statistics of a mask");
  c_st->add_option("--input", st.input, "weight manifest (otherwise synthetic mask)");
  c_st->add_option("--bits", st.bits, "synthetic mask length")->capture_default_str();
  c_st->add_option("--sparsity", st.sparsity, "synthetic S")->capture_default_str();
  c_st->add_option("--seed", st.seed, "seed")->capture_default_str();
  c_st->add_option("--n-out", st.n_out, "block length")->capture_default_str();
  c_st->add_option("--row-length", st.row_length, "also report CSR row CV for this length");
  c_st->callback([&] { action = [&] { return cmd_stats(st); }; });

  SpmvFlags sp;
  auto* c_sp = app.add_subcommand("spmv-bench", "dense/CSR/decoded SpMV equivalence and timing");
  c_sp->add_option("--rows", sp.rows, "rows")->capture_default_str();
  c_sp->add_option("--cols", sp.cols, "columns")->capture_default_str();
  c_sp->add_option("--sparsity", sp.sparsity, "S")->capture_default_str();
  c_sp->add_option("--repeat", sp.repeat, "multiplies per path")->capture_default_str();
  c_sp->add_option("--seed", sp.seed, "seed")->capture_default_str();
  c_sp->add_option("--n-in", sp.n_in, "decoder n_in")->capture_default_str();
  c_sp->add_option("--n-s", sp.n_s, "decoder n_s")->capture_default_str();
  c_sp->add_option("--type", sp.type, "int8, int16, int32 or float")->capture_default_str();
  c_sp->add_flag("--csv", sp.csv, "CSV instead of JSON");
  c_sp->callback([&] { action = [&] { return cmd_spmv_bench(sp); }; });

  std::string k_matrix;
  unsigned k_in = 8, k_out = 80, k_s = 0;
  auto* c_cost = app.add_subcommand("cost", "XOR gate and transistor count of a decoder");
  c_cost->add_option("--matrix", k_matrix, "matrix blob");
  c_cost->add_option("--n-in", k_in, "n_in")->capture_default_str();
  c_cost->add_option("--n-out", k_out, "n_out")->capture_default_str();
  c_cost->add_option("--n-s", k_s, "n_s")->capture_default_str();
  c_cost->callback([&] { action = [&] { return cmd_cost(k_matrix, k_in, k_out, k_s); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kExitInput;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "malformed_input"}, {"message", e.what()}}.dump() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
}
