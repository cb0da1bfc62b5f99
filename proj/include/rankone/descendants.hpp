#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "rankone/levels.hpp"

namespace rankone {

// Heights of the levels of column `target_stage` whose union is the base
// level: base.height translated by every combination of stage offsets.
struct DescendantSet {
  Level base;
  int target_stage = 0;
  std::vector<BigInt> heights;  // sorted
};

inline DescendantSet descendants(const TowerGeometry& g, const Level& base, int target_stage,
                                 std::uint64_t size_budget = (1ull << 24)) {
  if (base.column > target_stage) throw PreconditionError("descendants: target above base column");
  if (target_stage > g.depth()) throw DepthError("descendants: prefix too shallow");
  BigInt card = g.descendant_count(base.column, target_stage);
  if (card > size_budget)
    throw BudgetError("descendants: set has " + card.str() + " elements (budget " +
                      std::to_string(size_budget) + ")");
  DescendantSet out;
  out.base = base;
  out.target_stage = target_stage;
  out.heights = {base.height};
  for (int i = base.column; i < target_stage; ++i) {
    std::vector<BigInt> next;
    next.reserve(out.heights.size() * g.offset_set(i).size());
    for (const BigInt& x : out.heights)
      for (const BigInt& t : g.offset_set(i)) next.push_back(x + t);
    out.heights = std::move(next);
  }
  std::sort(out.heights.begin(), out.heights.end());
  return out;
}

// Smallest N >= column such that every descendant of a level at or below
// max_level_height has height at most h_N - window, which keeps the shifted
// count formula valid for every |k| < window.
inline std::optional<int> min_valid_stage(const TowerGeometry& g, int column,
                                          const BigInt& max_level_height, const BigInt& window) {
  for (int N = column; N <= g.depth(); ++N) {
    BigInt top = max_level_height + (g.max_descendant(N) - g.max_descendant(column));
    if (top <= g.height(N) - window) return N;
  }
  return std::nullopt;
}

inline int require_valid_stage(const TowerGeometry& g, int column, const BigInt& max_level_height,
                               const BigInt& window) {
  std::optional<int> N = min_valid_stage(g, column, max_level_height, window);
  if (!N) {
    BigInt top = max_level_height + (g.max_descendant(g.depth()) - g.max_descendant(column));
    throw DepthError("no valid stage within built prefix (deepest tried " +
                     std::to_string(g.depth()) + ": max descendant " + top.str() + " > h - " +
                     window.str() + " = " + BigInt(g.height(g.depth()) - window).str() + ")");
  }
  return *N;
}

inline int min_valid_stage_for_set(const TowerGeometry& g, const LevelSet& s,
                                   const BigInt& window) {
  BigInt mx = s.heights.empty() ? BigInt(0) : s.heights.back();
  return require_valid_stage(g, s.column, mx, window);
}

}  // namespace rankone
