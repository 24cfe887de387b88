#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace f2f {

inline constexpr unsigned kMaxEntropyBlockBits = 8;

// A block of n_b bits: bit i of `mask` set means position i is unpruned and
// must equal bit i of `data`; pruned positions of `data` are zero.
struct MaskedPattern {
  std::uint32_t mask = 0;
  std::uint32_t data = 0;
};

// All C(n_b, n_u) * 2^n_u distinct patterns, masks in increasing order.
std::vector<MaskedPattern> enumerate_masked_blocks(unsigned n_b, unsigned n_u);

inline bool compatible(std::uint32_t symbol, const MaskedPattern& p) {
  return (symbol & p.mask) == p.data;
}

struct SymbolTable {
  unsigned n_b = 0;
  unsigned n_u = 0;
  std::vector<std::uint32_t> symbols;
  std::vector<std::size_t> counts;  // blocks assigned to each symbol
  std::vector<double> probabilities;
  double entropy_bits = 0.0;
  // False when the cover search hit its node budget and fell back to greedy.
  bool cover_exact = true;
  // False when the assignment was improved heuristically instead of exhaustively.
  bool assignment_exact = true;

  nlohmann::json to_json() const;
};

struct SymbolSearchOptions {
  std::uint64_t node_budget = 20'000'000;
};

// Smallest symbol set covering every masked block, with the block-to-symbol
// assignment that minimizes the entropy of the symbol distribution (blocks
// uniformly distributed).
SymbolTable min_symbol_set(unsigned n_b, unsigned n_u, const SymbolSearchOptions& options = {});

// ceil(log2 |symbols|).
unsigned fixed_to_fixed_bits(const SymbolTable& table);

double entropy_of_counts(const std::vector<std::size_t>& counts);

}  // namespace f2f
