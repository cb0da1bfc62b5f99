#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rankone/descendants.hpp"
#include "rankone/geometry.hpp"

namespace rankone {

// Windowed difference-count histogram of the offset sumset
//   S = H_base ⊕ H_{base+1} ⊕ ... ⊕ H_{N-1}
// (the descendant heights of a column-`base` level, minus the level height).
// count(k) = |S ∩ (k + S)| = number of ordered pairs (s, s') with s - s' = k,
// exact for every |k| <= window. Counts and keys are big integers.
struct DiffHistogram {
  int base_column = 0;
  int target_stage = 0;
  BigInt window = 0;
  std::vector<std::pair<BigInt, BigInt>> counts;  // sorted by k, zero counts omitted
  std::vector<BigInt> cumulative;                 // cumulative[i] = sum of counts[0..i-1]

  void finish() {
    std::sort(counts.begin(), counts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    cumulative.assign(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i)
      cumulative[i + 1] = cumulative[i] + counts[i].second;
  }

  BigInt count(const BigInt& k) const {
    auto it = std::lower_bound(counts.begin(), counts.end(), k,
                               [](const auto& e, const BigInt& v) { return e.first < v; });
    if (it == counts.end() || it->first != k) return 0;
    return it->second;
  }

  // Sum of count(k) over lo <= k <= hi (clamped to the certified window by
  // the caller).
  BigInt total_range(const BigInt& lo, const BigInt& hi) const {
    if (lo > hi) return 0;
    auto lower = std::lower_bound(counts.begin(), counts.end(), lo,
                                  [](const auto& e, const BigInt& v) { return e.first < v; });
    auto upper = std::upper_bound(counts.begin(), counts.end(), hi,
                                  [](const BigInt& v, const auto& e) { return v < e.first; });
    return cumulative[upper - counts.begin()] - cumulative[lower - counts.begin()];
  }

  BigInt total() const { return cumulative.empty() ? BigInt(0) : cumulative.back(); }
};

namespace detail {

inline std::vector<std::pair<BigInt, BigInt>> stage_diff_multiset(const std::vector<BigInt>& offs) {
  std::unordered_map<BigInt, BigInt, BigIntHash> acc;
  for (const BigInt& a : offs)
    for (const BigInt& b : offs) acc[a - b] += 1;
  std::vector<std::pair<BigInt, BigInt>> out(acc.begin(), acc.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace detail

// Stagewise convolution of per-stage offset-difference multisets, processed
// largest stage first. A partial sum is dropped once it cannot return to the
// window: the remaining stages can move it by at most the sum of their
// maximal offsets. This keeps the state set small even when |S| is far
// beyond anything materializable, and the result is exact on the window.
inline DiffHistogram windowed_diff_hist(const TowerGeometry& g, int base_column, int target_stage,
                                        const BigInt& window) {
  if (base_column > target_stage || target_stage > g.depth())
    throw PreconditionError("windowed_diff_hist: bad stage range");
  using Map = std::unordered_map<BigInt, BigInt, BigIntHash>;
  Map state;
  state[0] = 1;
  for (int i = target_stage - 1; i >= base_column; --i) {
    const auto diffs = detail::stage_diff_multiset(g.offset_set(i));
    const BigInt reach = g.max_descendant(i) - g.max_descendant(base_column);
    const BigInt bound = window + reach;
    Map next;
    next.reserve(state.size() * diffs.size());
    for (const auto& [s, c] : state) {
      for (const auto& [d, cd] : diffs) {
        BigInt v = s + d;
        if (v <= bound && v >= -bound) next[v] += c * cd;
      }
    }
    state = std::move(next);
  }
  DiffHistogram h;
  h.base_column = base_column;
  h.target_stage = target_stage;
  h.window = window;
  h.counts.reserve(state.size());
  for (auto& [k, c] : state)
    if (k <= window && k >= -window) h.counts.emplace_back(k, c);
  h.finish();
  return h;
}

// Independent route for tests and small runs: materialize the descendant
// offsets and count ordered pairs directly.
inline DiffHistogram pair_diff_hist(const TowerGeometry& g, int base_column, int target_stage,
                                    const BigInt& window,
                                    std::uint64_t pair_budget = (1ull << 24)) {
  DescendantSet d =
      descendants(g, Level{base_column, 0}, target_stage, pair_budget);
  BigInt pairs = BigInt(d.heights.size()) * BigInt(d.heights.size());
  if (pairs > pair_budget)
    throw BudgetError("pair_diff_hist: " + pairs.str() + " ordered pairs (budget " +
                      std::to_string(pair_budget) + ")");
  std::unordered_map<BigInt, BigInt, BigIntHash> acc;
  for (const BigInt& a : d.heights)
    for (const BigInt& b : d.heights) {
      BigInt k = a - b;
      if (k <= window && k >= -window) acc[k] += 1;
    }
  DiffHistogram h;
  h.base_column = base_column;
  h.target_stage = target_stage;
  h.window = window;
  h.counts.assign(acc.begin(), acc.end());
  h.finish();
  return h;
}

}  // namespace rankone
