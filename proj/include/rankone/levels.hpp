#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rankone/geometry.hpp"

namespace rankone {

// A single level of column `column`, addressed by its height.
struct Level {
  int column = 0;
  BigInt height = 0;
};

// A finite union of levels of one column, heights sorted and distinct.
struct LevelSet {
  int column = 0;
  std::vector<BigInt> heights;

  void normalize() {
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  }
};

inline LevelSet unit_interval() { return LevelSet{0, {BigInt(0)}}; }

inline LevelSet bottom_level(int column) { return LevelSet{column, {BigInt(0)}}; }

// The two halves of the unit interval, as levels of column 1 (needs r_0 = 2).
inline std::pair<LevelSet, LevelSet> halves_of_unit(const TowerGeometry& g) {
  if (g.stages[0].cuts != 2)
    throw PreconditionError("halves of the unit interval need r_0 = 2");
  return {LevelSet{1, {BigInt(0)}}, LevelSet{1, {g.offset_set(0)[1]}}};
}

inline Rational level_set_measure(const TowerGeometry& g, const LevelSet& s) {
  return g.width(s.column) * BigInt(s.heights.size());
}

inline void check_level_set(const TowerGeometry& g, const LevelSet& s) {
  if (s.column < 0 || s.column > g.depth())
    throw PreconditionError("level set column outside built prefix");
  for (const BigInt& h : s.heights)
    if (h < 0 || h >= g.height(s.column))
      throw PreconditionError("level height outside column");
}

// Re-express a level set in a deeper column: every level splits into its
// subcolumn copies, translated by the stage offsets.
inline LevelSet descend_level_set(const TowerGeometry& g, const LevelSet& s, int to_col,
                                  std::uint64_t size_budget = (1ull << 24)) {
  if (to_col < s.column) throw PreconditionError("descend_level_set: target column above set");
  if (to_col > g.depth()) throw DepthError("descend_level_set: prefix too shallow");
  BigInt card = BigInt(s.heights.size()) * g.descendant_count(s.column, to_col);
  if (card > size_budget)
    throw BudgetError("descend_level_set: would materialize " + card.str() + " levels (budget " +
                      std::to_string(size_budget) + ")");
  LevelSet out;
  out.column = to_col;
  out.heights = s.heights;
  for (int i = s.column; i < to_col; ++i) {
    std::vector<BigInt> next;
    next.reserve(out.heights.size() * g.offset_set(i).size());
    for (const BigInt& x : out.heights)
      for (const BigInt& t : g.offset_set(i)) next.push_back(x + t);
    out.heights = std::move(next);
  }
  out.normalize();
  return out;
}

// Does the level (w, x) lie inside `target`? Decided by geometric descent:
// at each stage the level belongs to a subcolumn copy (offset t with
// t <= x' < t + h_i) or to a spacer block, in which case it is outside every
// earlier column. Requires w >= target.column.
inline bool level_inside_set(const TowerGeometry& g, int w, BigInt x, const LevelSet& target) {
  if (w < target.column)
    throw PreconditionError("level_inside_set: level shallower than target column");
  for (int i = w - 1; i >= target.column; --i) {
    const std::vector<BigInt>& offs = g.offset_set(i);
    auto it = std::upper_bound(offs.begin(), offs.end(), x);
    if (it == offs.begin()) return false;
    const BigInt& t = *std::prev(it);
    x -= t;
    if (x >= g.height(i)) return false;  // spacer level added at stage i
  }
  return std::binary_search(target.heights.begin(), target.heights.end(), x);
}

// Measure of the overlap of a full level (w, x) with a level set. A level of
// a column shallower than the set's is split into its subcolumn copies until
// containment is decidable per piece.
inline Rational level_overlap_measure(const TowerGeometry& g, int w, const BigInt& x,
                                      const LevelSet& target) {
  if (w >= target.column)
    return level_inside_set(g, w, x, target) ? g.width(w) : Rational(0);
  Rational total = 0;
  for (const BigInt& t : g.offset_set(w)) total += level_overlap_measure(g, w + 1, x + t, target);
  return total;
}

inline std::string level_set_text(const LevelSet& s) {
  std::string out = "C" + std::to_string(s.column) + "{";
  for (std::size_t i = 0; i < s.heights.size(); ++i) {
    if (i) out += ',';
    out += s.heights[i].str();
  }
  out += '}';
  return out;
}

}  // namespace rankone
