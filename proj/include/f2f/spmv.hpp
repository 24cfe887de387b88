#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <type_traits>
#include <vector>

#include "f2f/bitplane.hpp"
#include "f2f/codec.hpp"
#include "f2f/error.hpp"

namespace f2f {

template <class T>
using Accumulator = std::conditional_t<std::is_integral_v<T>, std::int64_t, T>;

// Row-major dense values with a pruning mask (1 = unpruned) of rows*cols bits.
template <class T>
struct MaskedDense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> values;
  PackedBitVector mask;

  void validate() const {
    if (values.size() != rows * cols || mask.size() != rows * cols) {
      fail(ErrorKind::malformed_input, "dense matrix size mismatch");
    }
  }
};

template <class T>
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> dat;
  std::vector<std::size_t> col;
  std::vector<std::size_t> row;  // rows + 1 offsets

  void validate() const {
    if (row.size() != rows + 1 || row.front() != 0 || row.back() != dat.size() ||
        col.size() != dat.size()) {
      fail(ErrorKind::malformed_input, "CSR offsets inconsistent");
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (row[i] > row[i + 1]) fail(ErrorKind::malformed_input, "CSR row offsets decrease");
    }
    for (std::size_t c : col) {
      if (c >= cols) fail(ErrorKind::malformed_input, "CSR column index out of bounds");
    }
  }
};

template <class T>
CsrMatrix<T> csr_from_dense(const MaskedDense<T>& a) {
  a.validate();
  CsrMatrix<T> csr;
  csr.rows = a.rows;
  csr.cols = a.cols;
  csr.row.reserve(a.rows + 1);
  csr.row.push_back(0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (a.mask.get(i * a.cols + j)) {
        csr.dat.push_back(a.values[i * a.cols + j]);
        csr.col.push_back(j);
      }
    }
    csr.row.push_back(csr.dat.size());
  }
  return csr;
}

template <class T>
void check_vector(std::size_t cols, std::span<const T> x) {
  if (x.size() != cols) fail(ErrorKind::malformed_input, "vector length does not match columns");
}

template <class T>
std::vector<Accumulator<T>> spmv_dense_masked(const MaskedDense<T>& a, std::span<const T> x) {
  a.validate();
  check_vector(a.cols, x);
  std::vector<Accumulator<T>> y(a.rows, 0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    Accumulator<T> acc = 0;
    for (std::size_t j = 0; j < a.cols; ++j) {
      if (a.mask.get(i * a.cols + j)) {
        acc += static_cast<Accumulator<T>>(a.values[i * a.cols + j]) * x[j];
      }
    }
    y[i] = acc;
  }
  return y;
}

// y_i = sum over row i's nonzeros of dat[k] * x[col[k]].
template <class T>
std::vector<Accumulator<T>> spmv_csr(const CsrMatrix<T>& a, std::span<const T> x) {
  a.validate();
  check_vector(a.cols, x);
  std::vector<Accumulator<T>> y(a.rows, 0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    Accumulator<T> acc = 0;
    for (std::size_t k = a.row[i]; k < a.row[i + 1]; ++k) {
      acc += static_cast<Accumulator<T>>(a.dat[k]) * x[a.col[k]];
    }
    y[i] = acc;
  }
  return y;
}

// Each row's weights compressed as sizeof(T)*8 bit-planes through one shared
// decoder; the per-row mask is kept for zero skipping.
template <class T>
struct EncodedRowMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  DecoderSpec spec;
  CorrectionConfig correction;
  std::vector<PackedBitVector> masks;
  std::vector<std::vector<PlaneRecord>> row_planes;
};

template <class T>
TensorManifest row_manifest(std::size_t cols) {
  return TensorManifest{{cols}, static_cast<unsigned>(sizeof(T) * 8)};
}

template <class T>
EncodedRowMatrix<T> encode_rows(const MaskedDense<T>& a, const DecoderSpec& spec,
                                const CorrectionConfig& cfg, const EncoderOptions& options = {}) {
  static_assert(std::is_trivially_copyable_v<T>);
  a.validate();
  EncodedRowMatrix<T> enc{a.rows, a.cols, spec, cfg, {}, {}};
  const TensorManifest manifest = row_manifest<T>(a.cols);
  std::vector<std::uint8_t> raw(a.cols * sizeof(T));
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::memcpy(raw.data(), a.values.data() + i * a.cols, raw.size());
    PackedBitVector mask = a.mask.slice(i * a.cols, a.cols);
    const BitPlaneSet set = group_bitplanes(raw, manifest, mask);
    enc.row_planes.push_back(compress_planes(set, spec, cfg, options).records);
    enc.masks.push_back(std::move(mask));
  }
  return enc;
}

// Row i as decoded values; pruned entries hold whatever the decoder produced.
template <class T>
std::vector<T> decode_row(const EncodedRowMatrix<T>& enc, std::size_t i) {
  const auto planes = decode_planes(enc.row_planes.at(i), enc.cols, enc.spec, enc.correction);
  const auto raw = ungroup_bitplanes(planes, row_manifest<T>(enc.cols));
  std::vector<T> values(enc.cols);
  std::memcpy(values.data(), raw.data(), raw.size());
  return values;
}

template <class T>
Accumulator<T> masked_dot(std::span<const T> row, const PackedBitVector& mask,
                          std::span<const T> x) {
  Accumulator<T> acc = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (mask.get(j)) acc += static_cast<Accumulator<T>>(row[j]) * x[j];
  }
  return acc;
}

template <class T>
std::vector<Accumulator<T>> spmv_decoded(const EncodedRowMatrix<T>& enc, std::span<const T> x) {
  check_vector(enc.cols, x);
  if (enc.masks.size() != enc.rows || enc.row_planes.size() != enc.rows) {
    fail(ErrorKind::corrupt_artifact, "encoded matrix row count mismatch");
  }
  std::vector<Accumulator<T>> y(enc.rows, 0);
  for (std::size_t i = 0; i < enc.rows; ++i) {
    const std::vector<T> row = decode_row(enc, i);
    y[i] = masked_dot<T>(row, enc.masks[i], x);
  }
  return y;
}

}  // namespace f2f
