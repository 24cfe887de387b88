#include "f2f/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "f2f/error.hpp"

namespace f2f {

std::vector<MaskedPattern> enumerate_masked_blocks(unsigned n_b, unsigned n_u) {
  if (n_b > kMaxEntropyBlockBits || n_u > n_b) {
    fail(ErrorKind::invalid_parameter, "need 0 <= n_u <= n_b <= " +
                                           std::to_string(kMaxEntropyBlockBits));
  }
  std::vector<MaskedPattern> out;
  for (std::uint32_t mask = 0; mask < (1U << n_b); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) != n_u) continue;
    // Walk every subset of the mask as the data pattern.
    std::uint32_t data = 0;
    do {
      out.push_back({mask, data});
      data = (data - mask) & mask;
    } while (data != 0);
  }
  return out;
}

double entropy_of_counts(const std::vector<std::size_t>& counts) {
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

// Covering state: for each mask, which data patterns are already produced by
// a chosen symbol. Pattern data is indexed by its compressed (pext) value.
class CoverSearch {
 public:
  CoverSearch(unsigned n_b, unsigned n_u, std::uint64_t budget)
      : n_b_(n_b), n_u_(n_u), budget_(budget) {
    for (std::uint32_t m = 0; m < (1U << n_b); ++m) {
      if (static_cast<unsigned>(std::popcount(m)) == n_u) masks_.push_back(m);
    }
    covered_.assign(masks_.size(), std::vector<int>(std::size_t{1} << n_u, 0));
    uncovered_.assign(masks_.size(), std::size_t{1} << n_u);
  }

  // Finds covers of exactly `k` symbols (symbol 0 always included: XOR by a
  // constant maps covers to covers). Collects up to `limit` of them.
  bool search(unsigned k, std::size_t limit, std::vector<std::vector<std::uint32_t>>& found) {
    limit_ = limit;
    found_ = &found;
    chosen_.clear();
    exhausted_ = false;
    add(0);
    recurse(k, 1);
    remove(0);
    return !found.empty();
  }

  bool exhausted() const { return exhausted_; }

 private:
  std::uint32_t project(std::uint32_t symbol, std::uint32_t mask) const {
    std::uint32_t out = 0;
    unsigned j = 0;
    for (unsigned i = 0; i < n_b_; ++i) {
      if ((mask >> i) & 1U) out |= ((symbol >> i) & 1U) << j++;
    }
    return out;
  }

  void add(std::uint32_t symbol) {
    chosen_.push_back(symbol);
    for (std::size_t m = 0; m < masks_.size(); ++m) {
      if (covered_[m][project(symbol, masks_[m])]++ == 0) --uncovered_[m];
    }
  }

  void remove(std::uint32_t symbol) {
    chosen_.pop_back();
    for (std::size_t m = 0; m < masks_.size(); ++m) {
      if (--covered_[m][project(symbol, masks_[m])] == 0) ++uncovered_[m];
    }
  }

  void recurse(unsigned k, std::uint32_t next) {
    if (found_->size() >= limit_ || exhausted_) return;
    if (nodes_++ >= budget_) {
      exhausted_ = true;
      return;
    }
    const std::size_t slots = k - chosen_.size();
    const std::size_t worst = *std::max_element(uncovered_.begin(), uncovered_.end());
    if (worst == 0) {
      if (slots == 0) found_->push_back(chosen_);
      return;
    }
    // Each symbol fixes exactly one pattern per mask.
    if (worst > slots) return;
    for (std::uint32_t s = next; s < (1U << n_b_); ++s) {
      if ((1U << n_b_) - s < slots) break;
      add(s);
      recurse(k, s + 1);
      remove(s);
      if (found_->size() >= limit_ || exhausted_) return;
    }
  }

  unsigned n_b_;
  unsigned n_u_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::size_t limit_ = 1;
  bool exhausted_ = false;
  std::vector<std::uint32_t> masks_;
  std::vector<std::vector<int>> covered_;
  std::vector<std::size_t> uncovered_;
  std::vector<std::uint32_t> chosen_;
  std::vector<std::vector<std::uint32_t>>* found_ = nullptr;
};

std::vector<std::uint32_t> greedy_cover(const std::vector<MaskedPattern>& blocks, unsigned n_b) {
  std::vector<bool> done(blocks.size(), false);
  std::size_t remaining = blocks.size();
  std::vector<std::uint32_t> symbols;
  while (remaining > 0) {
    std::uint32_t best = 0;
    std::size_t best_gain = 0;
    for (std::uint32_t s = 0; s < (1U << n_b); ++s) {
      std::size_t gain = 0;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (!done[i] && compatible(s, blocks[i])) ++gain;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    symbols.push_back(best);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (!done[i] && compatible(best, blocks[i])) {
        done[i] = true;
        --remaining;
      }
    }
  }
  std::sort(symbols.begin(), symbols.end());
  return symbols;
}

// Assign each block to its highest-priority compatible symbol.
std::vector<std::size_t> priority_counts(const std::vector<std::vector<std::size_t>>& options,
                                         const std::vector<std::size_t>& rank, std::size_t k,
                                         std::vector<std::size_t>* assignment = nullptr) {
  std::vector<std::size_t> counts(k, 0);
  if (assignment) assignment->resize(options.size());
  for (std::size_t i = 0; i < options.size(); ++i) {
    std::size_t pick = options[i].front();
    for (std::size_t o : options[i]) {
      if (rank[o] < rank[pick]) pick = o;
    }
    ++counts[pick];
    if (assignment) (*assignment)[i] = pick;
  }
  return counts;
}

struct Assignment {
  std::vector<std::size_t> counts;
  double entropy = 0.0;
  bool exact = true;
};

// Minimum-entropy assignment. Entropy is Schur-concave, so moving a block to
// a compatible symbol with at least as many blocks never increases it; some
// priority order therefore reaches the optimum. All orders are tried when
// k! is small, otherwise a count-sorted order is refined by single moves.
Assignment best_assignment(const std::vector<MaskedPattern>& blocks,
                           const std::vector<std::uint32_t>& symbols) {
  const std::size_t k = symbols.size();
  std::vector<std::vector<std::size_t>> options(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (compatible(symbols[j], blocks[i])) options[i].push_back(j);
    }
  }

  Assignment best;
  if (k <= 8) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> rank(k);
    bool first = true;
    do {
      for (std::size_t r = 0; r < k; ++r) rank[order[r]] = r;
      auto counts = priority_counts(options, rank, k);
      const double h = entropy_of_counts(counts);
      if (first || h < best.entropy - 1e-12) {
        best = {std::move(counts), h, true};
        first = false;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
  }

  std::vector<std::size_t> coverage(k, 0);
  for (const auto& o : options) {
    for (std::size_t j : o) ++coverage[j];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return coverage[a] > coverage[b]; });
  std::vector<std::size_t> rank(k);
  for (std::size_t r = 0; r < k; ++r) rank[order[r]] = r;
  std::vector<std::size_t> assignment;
  auto counts = priority_counts(options, rank, k, &assignment);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::size_t from = assignment[i];
      for (std::size_t to : options[i]) {
        if (to != from && counts[to] >= counts[from]) {
          --counts[from];
          ++counts[to];
          assignment[i] = to;
          improved = true;
          break;
        }
      }
    }
  }
  return {counts, entropy_of_counts(counts), false};
}

}  // namespace

SymbolTable min_symbol_set(unsigned n_b, unsigned n_u, const SymbolSearchOptions& options) {
  const auto blocks = enumerate_masked_blocks(n_b, n_u);
  SymbolTable table;
  table.n_b = n_b;
  table.n_u = n_u;

  // Small alphabets: collect every minimum cover so the entropy is minimized
  // over all of them, not just the first one found.
  const bool exhaustive = n_b <= 4;
  std::vector<std::vector<std::uint32_t>> covers;
  CoverSearch search(n_b, n_u, options.node_budget);
  for (unsigned k = 1U << n_u; k <= (1U << n_b); ++k) {
    if (search.search(k, exhaustive ? SIZE_MAX : 1, covers)) break;
    if (search.exhausted()) {
      table.cover_exact = false;
      break;
    }
  }
  if (covers.empty()) covers.push_back(greedy_cover(blocks, n_b));

  bool first = true;
  for (const auto& symbols : covers) {
    Assignment a = best_assignment(blocks, symbols);
    if (first || a.entropy < table.entropy_bits - 1e-12) {
      table.symbols = symbols;
      table.counts = std::move(a.counts);
      table.entropy_bits = a.entropy;
      table.assignment_exact = a.exact && exhaustive;
      first = false;
    }
  }
  table.probabilities.clear();
  for (std::size_t c : table.counts) {
    table.probabilities.push_back(static_cast<double>(c) / static_cast<double>(blocks.size()));
  }
  return table;
}

unsigned fixed_to_fixed_bits(const SymbolTable& table) {
  const std::size_t k = table.symbols.size();
  return k <= 1 ? 0 : static_cast<unsigned>(std::bit_width(k - 1));
}

nlohmann::json SymbolTable::to_json() const {
  nlohmann::json symbols_json = nlohmann::json::array();
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    std::string bits(n_b, '0');
    for (unsigned b = 0; b < n_b; ++b) {
      if ((symbols[i] >> b) & 1U) bits[b] = '1';
    }
    symbols_json.push_back({{"symbol", bits}, {"count", counts[i]}, {"probability", probabilities[i]}});
  }
  return {
      {"n_b", n_b},
      {"n_u", n_u},
      {"symbols", std::move(symbols_json)},
      {"entropy_bits", entropy_bits},
      {"fixed_to_fixed_bits", fixed_to_fixed_bits(*this)},
      {"cover_exact", cover_exact},
      {"assignment_exact", assignment_exact},
  };
}

}  // namespace f2f
