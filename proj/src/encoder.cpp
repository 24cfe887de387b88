#include "f2f/encoder.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

#include "f2f/error.hpp"

namespace f2f {

namespace {

constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

// Word-packed view of the decoder: per-chunk output tables and the blocks.
struct TrellisTables {
  unsigned words = 0;           // 64-bit words per output block
  std::size_t inputs = 0;       // 2^n_in
  std::size_t states = 0;       // 2^(n_in * n_s)
  std::vector<std::uint64_t> state_out;  // states x words, chunks 0..n_s-1
  std::vector<std::uint64_t> new_out;    // inputs x words, chunk n_s
  std::vector<std::uint64_t> data;       // l x words
  std::vector<std::uint64_t> mask;       // l x words
};

std::vector<std::uint64_t> chunk_table(const DecoderSpec& spec, unsigned chunk, unsigned words) {
  const unsigned n_in = spec.n_in();
  const std::size_t inputs = std::size_t{1} << n_in;
  std::vector<std::uint64_t> table(inputs * words, 0);
  for (std::size_t u = 1; u < inputs; ++u) {
    const std::size_t prev = u & (u - 1);
    const auto bit = static_cast<unsigned>(std::countr_zero(u));
    const auto col = spec.column(chunk * n_in + (n_in - 1 - bit)).words();
    for (unsigned w = 0; w < words; ++w) table[u * words + w] = table[prev * words + w] ^ col[w];
  }
  return table;
}

TrellisTables build_tables(const DecoderSpec& spec, std::span<const MaskedBlock> blocks) {
  TrellisTables t;
  const unsigned n_in = spec.n_in();
  const unsigned n_s = spec.n_s();
  t.words = (spec.n_out() + 63) / 64;
  t.inputs = std::size_t{1} << n_in;
  t.states = std::size_t{1} << (n_in * n_s);

  t.new_out = chunk_table(spec, n_s, t.words);
  t.state_out.assign(t.states * t.words, 0);
  for (unsigned k = 0; k < n_s; ++k) {
    const auto table = chunk_table(spec, k, t.words);
    const unsigned shift = n_in * (n_s - 1 - k);
    for (std::size_t s = 0; s < t.states; ++s) {
      const std::size_t u = (s >> shift) & (t.inputs - 1);
      for (unsigned w = 0; w < t.words; ++w) t.state_out[s * t.words + w] ^= table[u * t.words + w];
    }
  }

  t.data.resize(blocks.size() * t.words);
  t.mask.resize(blocks.size() * t.words);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].data.size() != spec.n_out()) {
      fail(ErrorKind::invalid_parameter, "block width does not match n_out");
    }
    const auto d = blocks[b].data.words();
    const auto m = blocks[b].mask.words();
    for (unsigned w = 0; w < t.words; ++w) {
      t.data[b * t.words + w] = d[w] & m[w];
      t.mask[b * t.words + w] = m[w];
    }
  }
  return t;
}

std::uint32_t masked_errors(const std::uint64_t* out, const std::uint64_t* data,
                            const std::uint64_t* mask, unsigned words) {
  std::uint32_t e = 0;
  for (unsigned w = 0; w < words; ++w) {
    e += static_cast<std::uint32_t>(std::popcount((out[w] ^ data[w]) & mask[w]));
  }
  return e;
}

// Backward pass: cost_to_go[s] after block b is the minimum error over blocks
// b..l-1 entering with state s; `choice` records the smallest input reaching
// it. Following choices forward from the zero state then yields the
// lexicographically smallest optimal stream. W = 0 means runtime word count.
template <unsigned W, class Choice>
std::uint32_t backward_pass(const TrellisTables& t, unsigned n_in, unsigned n_s, std::size_t l,
                            std::vector<Choice>& choice) {
  const unsigned words = W != 0 ? W : t.words;
  const std::size_t states = t.states;
  const std::size_t inputs = t.inputs;
  const std::size_t keep = n_s == 0 ? 0 : (std::size_t{1} << (n_in * (n_s - 1))) - 1;

  std::vector<std::uint32_t> next(states, 0);
  std::vector<std::uint32_t> cur(next.size(), 0);
  std::vector<std::uint64_t> masked_new(inputs * words);
  std::vector<std::uint64_t> x_dynamic(words);
  std::uint64_t x_fixed[W != 0 ? W : 1];
  std::uint64_t* x = W != 0 ? x_fixed : x_dynamic.data();

  for (std::size_t b = l; b-- > 0;) {
    const std::uint64_t* d = &t.data[b * words];
    const std::uint64_t* m = &t.mask[b * words];
    for (std::size_t u = 0; u < inputs; ++u) {
      for (unsigned w = 0; w < words; ++w) {
        masked_new[u * words + w] = t.new_out[u * words + w] & m[w];
      }
    }
    Choice* row = choice.data() + b * states;
    for (std::size_t s = 0; s < states; ++s) {
      for (unsigned w = 0; w < words; ++w) x[w] = (t.state_out[s * words + w] ^ d[w]) & m[w];
      // With n_s = 0 there is a single state and every input leads back to it.
      const std::uint32_t* g = n_s == 0 ? next.data() : next.data() + ((s & keep) << n_in);
      const std::size_t g_stride = n_s == 0 ? 0 : 1;
      std::uint32_t best = kInfinity;
      std::size_t best_u = 0;
      const std::uint64_t* tm = masked_new.data();
      for (std::size_t u = 0; u < inputs; ++u, tm += words) {
        std::uint32_t e = g[u * g_stride];
        for (unsigned w = 0; w < words; ++w) {
          e += static_cast<std::uint32_t>(std::popcount(x[w] ^ tm[w]));
        }
        if (e < best) {
          best = e;
          best_u = u;
        }
      }
      row[s] = static_cast<Choice>(best_u);
      cur[s] = best;
    }
    std::swap(cur, next);
  }
  return next[0];
}

template <class Choice>
std::uint32_t run_backward(const TrellisTables& t, unsigned n_in, unsigned n_s, std::size_t l,
                           std::vector<Choice>& choice) {
  switch (t.words) {
    case 1: return backward_pass<1>(t, n_in, n_s, l, choice);
    case 2: return backward_pass<2>(t, n_in, n_s, l, choice);
    case 3: return backward_pass<3>(t, n_in, n_s, l, choice);
    case 4: return backward_pass<4>(t, n_in, n_s, l, choice);
    default: return backward_pass<0>(t, n_in, n_s, l, choice);
  }
}

template <class Choice>
EncodeResult trellis_encode(const DecoderSpec& spec, std::span<const MaskedBlock> blocks) {
  const unsigned n_in = spec.n_in();
  const unsigned n_s = spec.n_s();
  const std::size_t l = blocks.size();
  const TrellisTables t = build_tables(spec, blocks);
  const std::size_t stored_states = t.states;

  std::vector<Choice> choice(l * stored_states);
  const std::uint32_t optimum = run_backward(t, n_in, n_s, l, choice);

  EncodeResult result;
  result.stream.assign(n_s, 0);
  result.per_block_errors.reserve(l);
  const std::size_t state_mask = t.states - 1;
  std::size_t s = 0;
  std::vector<std::uint64_t> out(t.words);
  for (std::size_t b = 0; b < l; ++b) {
    const std::size_t u = choice[b * stored_states + s];
    result.stream.push_back(static_cast<InputVector>(u));
    for (unsigned w = 0; w < t.words; ++w) {
      out[w] = t.state_out[s * t.words + w] ^ t.new_out[u * t.words + w];
    }
    const std::uint32_t e =
        masked_errors(out.data(), &t.data[b * t.words], &t.mask[b * t.words], t.words);
    result.per_block_errors.push_back(e);
    result.total_errors += e;
    s = ((s << n_in) | u) & state_mask;
  }
  if (result.total_errors != optimum) {
    throw std::logic_error("trellis reconstruction disagrees with optimum");
  }
  return result;
}

}  // namespace

std::uint32_t err_num(const PackedBitVector& candidate, const MaskedBlock& block) {
  if (candidate.size() != block.data.size()) {
    fail(ErrorKind::invalid_parameter, "candidate width does not match block");
  }
  const auto c = candidate.words();
  const auto d = block.data.words();
  const auto m = block.mask.words();
  std::uint32_t e = 0;
  for (std::size_t w = 0; w < c.size(); ++w) {
    e += static_cast<std::uint32_t>(std::popcount((c[w] ^ d[w]) & m[w]));
  }
  return e;
}

EncodeResult encode_nonsequential(const DecoderSpec& spec, std::span<const MaskedBlock> blocks) {
  if (spec.n_s() != 0) {
    fail(ErrorKind::invalid_parameter, "encode_nonsequential requires n_s = 0");
  }
  const unsigned words = (spec.n_out() + 63) / 64;
  const auto table = chunk_table(spec, 0, words);
  const std::size_t inputs = std::size_t{1} << spec.n_in();

  EncodeResult result;
  result.stream.reserve(blocks.size());
  result.per_block_errors.reserve(blocks.size());
  for (const auto& block : blocks) {
    if (block.data.size() != spec.n_out()) {
      fail(ErrorKind::invalid_parameter, "block width does not match n_out");
    }
    const auto d = block.data.words();
    const auto m = block.mask.words();
    std::uint32_t best = kInfinity;
    std::size_t best_u = 0;
    for (std::size_t u = 0; u < inputs && best != 0; ++u) {
      const std::uint32_t e = masked_errors(&table[u * words], d.data(), m.data(), words);
      if (e < best) {
        best = e;
        best_u = u;
      }
    }
    result.stream.push_back(static_cast<InputVector>(best_u));
    result.per_block_errors.push_back(best);
    result.total_errors += best;
  }
  return result;
}

EncodeResult encode_sequential_dp(const DecoderSpec& spec, std::span<const MaskedBlock> blocks,
                                  const EncoderOptions& options) {
  const unsigned product = spec.window_bits();
  if (product > options.trellis_cap) {
    fail(ErrorKind::resource_limit, "n_in*(n_s+1) = " + std::to_string(product) +
                                        " exceeds trellis cap " +
                                        std::to_string(options.trellis_cap));
  }
  if (blocks.empty()) {
    EncodeResult empty;
    empty.stream.assign(spec.n_s(), 0);
    return empty;
  }
  if (spec.n_in() <= 8) return trellis_encode<std::uint8_t>(spec, blocks);
  if (spec.n_in() <= 16) return trellis_encode<std::uint16_t>(spec, blocks);
  return trellis_encode<std::uint32_t>(spec, blocks);
}

EncodeResult encode_plane(const DecoderSpec& spec, const PackedBitVector& plane,
                          const PackedBitVector& mask, const EncoderOptions& options) {
  const auto blocks = slice_blocks(plane, mask, spec.n_out());
  return encode_sequential_dp(spec, blocks, options);
}

}  // namespace f2f
