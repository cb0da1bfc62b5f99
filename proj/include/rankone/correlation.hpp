#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rankone/cache.hpp"
#include "rankone/diff_hist.hpp"
#include "rankone/levels.hpp"

namespace rankone {

struct CorrOptions {
  std::uint64_t pair_budget = 1ull << 24;
  std::uint64_t size_budget = 1ull << 24;
  std::string cache_dir;   // empty: no disk cache
  std::string spec_hash;   // keys the disk cache; required when cache_dir set
};

// Exact correlations mu(A cap T^k B) for finite unions of levels, by the
// shifted descendant-count formula. Sets in different columns are first
// re-expressed in the deeper column; all level pairs of one column share a
// single offset sumset, so one windowed histogram serves every query via
// shifted lookups. Histograms are memoized per (column, stage).
class CorrelationEngine {
 public:
  explicit CorrelationEngine(const TowerGeometry& g, CorrOptions opts = {})
      : geom_(&g), opts_(std::move(opts)), disk_(opts_.cache_dir) {}

  const TowerGeometry& geometry() const { return *geom_; }
  const CorrOptions& options() const { return opts_; }

  // Cached histogram with window at least `window`.
  const DiffHistogram& histogram(int column, int stage, const BigInt& window) {
    auto key = std::make_pair(column, stage);
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.window >= window) return it->second;
    const std::string disk_key = HistCache::key(opts_.spec_hash, column, stage);
    if (disk_.enabled()) {
      std::optional<DiffHistogram> cached = disk_.load(disk_key, window);
      if (cached) return cache_.insert_or_assign(key, std::move(*cached)).first->second;
    }
    DiffHistogram h = windowed_diff_hist(*geom_, column, stage, window);
    if (disk_.enabled()) disk_.store(disk_key, h);
    return cache_.insert_or_assign(key, std::move(h)).first->second;
  }

  struct Reduced {
    int column = 0;            // common column
    std::vector<BigInt> a;     // heights of A there
    std::vector<BigInt> b;     // heights of B there
    BigInt spread = 0;         // max |b - a| over pairs
    BigInt max_level = 0;
  };

  Reduced reduce(const LevelSet& A, const LevelSet& B) const {
    check_level_set(*geom_, A);
    check_level_set(*geom_, B);
    if (A.heights.empty() || B.heights.empty())
      throw PreconditionError("correlation: empty level set");
    Reduced r;
    r.column = std::max(A.column, B.column);
    r.a = descend_level_set(*geom_, A, r.column, opts_.size_budget).heights;
    r.b = descend_level_set(*geom_, B, r.column, opts_.size_budget).heights;
    BigInt pairs = BigInt(r.a.size()) * BigInt(r.b.size());
    if (pairs > opts_.pair_budget)
      throw BudgetError("correlation: " + pairs.str() + " level pairs (budget " +
                        std::to_string(opts_.pair_budget) + ")");
    BigInt lo = r.b.front() - r.a.back();
    BigInt hi = r.b.back() - r.a.front();
    r.spread = std::max(big_abs(lo), big_abs(hi));
    r.max_level = std::max(r.a.back(), r.b.back());
    return r;
  }

  // Stage at which every level of A and B keeps `window` levels of headroom.
  int valid_stage(const Reduced& r, const BigInt& window) const {
    return require_valid_stage(*geom_, r.column, r.max_level, window);
  }

  Rational correlation(const LevelSet& A, const LevelSet& B, const BigInt& k,
                       std::optional<int> stage_override = {}) {
    Reduced r = reduce(A, B);
    int N = stage_override ? *stage_override : valid_stage(r, big_abs(k) + 1);
    const DiffHistogram& f = histogram(r.column, N, big_abs(k) + r.spread);
    BigInt count = 0;
    for (const BigInt& a : r.a)
      for (const BigInt& b : r.b) count += f.count(k + b - a);
    return geom_->width(N) * count;
  }

  // Sum over 0 <= k < n of mu(A cap T^k B), by cumulative range queries.
  Rational correlation_prefix_sum(const LevelSet& A, const LevelSet& B, const BigInt& n,
                                  std::optional<int> stage_override = {}) {
    if (n <= 0) return 0;
    Reduced r = reduce(A, B);
    int N = stage_override ? *stage_override : valid_stage(r, n);
    const DiffHistogram& f = histogram(r.column, N, n - 1 + r.spread);
    BigInt count = 0;
    for (const BigInt& a : r.a)
      for (const BigInt& b : r.b) count += f.total_range(b - a, n - 1 + b - a);
    return geom_->width(N) * count;
  }

  struct SeriesEntry {
    BigInt k;
    BigInt pair_count;  // sum over level pairs of the shifted descendant counts
    Rational mu;
  };

  struct Series {
    BigInt window;
    int stage = 0;
    std::vector<SeriesEntry> entries;  // k = -window..window, dense
  };

  Series correlation_series(const LevelSet& A, const LevelSet& B, const BigInt& window,
                            std::optional<int> stage_override = {}) {
    Reduced r = reduce(A, B);
    BigInt work = (2 * window + 1) * BigInt(r.a.size()) * BigInt(r.b.size());
    if (work > opts_.pair_budget)
      throw BudgetError("correlation_series: " + work.str() + " (k, pair) lookups (budget " +
                        std::to_string(opts_.pair_budget) + ")");
    int N = stage_override ? *stage_override : valid_stage(r, window + 1);
    const DiffHistogram& f = histogram(r.column, N, window + r.spread);
    Series out;
    out.window = window;
    out.stage = N;
    for (BigInt k = -window; k <= window; ++k) {
      BigInt count = 0;
      for (const BigInt& a : r.a)
        for (const BigInt& b : r.b) count += f.count(k + b - a);
      out.entries.push_back({k, count, geom_->width(N) * count});
    }
    return out;
  }

  // Nonzero-mu positions k in [lo, hi] (sparse alternative to the dense series).
  std::vector<BigInt> support_in(const LevelSet& A, const LevelSet& B, const BigInt& lo,
                                 const BigInt& hi, std::optional<int> stage_override = {}) {
    Reduced r = reduce(A, B);
    BigInt window = std::max(big_abs(lo), big_abs(hi));
    int N = stage_override ? *stage_override : valid_stage(r, window + 1);
    const DiffHistogram& f = histogram(r.column, N, window + r.spread);
    std::vector<BigInt> out;
    for (const BigInt& a : r.a)
      for (const BigInt& b : r.b) {
        BigInt shift = b - a;
        for (const auto& [key, cnt] : f.counts) {
          BigInt k = key - shift;
          if (k >= lo && k <= hi && cnt != 0) out.push_back(k);
        }
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const TowerGeometry* geom_;
  CorrOptions opts_;
  HistCache disk_;
  std::map<std::pair<int, int>, DiffHistogram> cache_;
};

inline Rational correlation(const TowerGeometry& g, const LevelSet& A, const LevelSet& B,
                            const BigInt& k, CorrOptions opts = {}) {
  CorrelationEngine e(g, opts);
  return e.correlation(A, B, k);
}

// Verification oracle: intersects explicit descendant index sets of a fixed
// column under the translation k. Valid only while no orbit leaves the
// column, which is the stated precondition.
inline Rational oracle_correlation(const TowerGeometry& g, const LevelSet& A, const LevelSet& B,
                                   const BigInt& k, int stage, CorrOptions opts = {}) {
  check_level_set(g, A);
  check_level_set(g, B);
  if (stage < A.column || stage < B.column)
    throw PreconditionError("oracle_correlation: stage above operand columns");
  LevelSet da = descend_level_set(g, A, stage, opts.size_budget);
  LevelSet db = descend_level_set(g, B, stage, opts.size_budget);
  BigInt top = std::max(da.heights.back(), db.heights.back());
  if (big_abs(k) > g.height(stage) - 1 - top)
    throw PreconditionError("oracle_correlation: |k| = " + big_abs(k).str() +
                            " exceeds headroom " + BigInt(g.height(stage) - 1 - top).str() +
                            " at stage " + std::to_string(stage));
  // count |D_A cap (k + D_B)| with both sets sorted
  BigInt count = 0;
  std::size_t i = 0, j = 0;
  while (i < da.heights.size() && j < db.heights.size()) {
    BigInt shifted = db.heights[j] + k;
    if (da.heights[i] < shifted)
      ++i;
    else if (shifted < da.heights[i])
      ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return g.width(stage) * count;
}

// Scalable oracle: lazy simulation of the column maps themselves. Each piece
// is a full level of some column; a step moves it one level up, and a piece
// at the top of its column is first rewritten as its subcolumn copies one
// stage deeper. This is the same column-map simulation continued across
// stages, and never touches the difference-count formula.
inline Rational flow_correlation(const TowerGeometry& g, LevelSet A, LevelSet B, BigInt k) {
  check_level_set(g, A);
  check_level_set(g, B);
  if (k < 0) {
    std::swap(A, B);
    k = -k;
  }
  std::vector<std::pair<int, BigInt>> pieces;
  for (const BigInt& x : B.heights) pieces.emplace_back(B.column, x);
  for (BigInt step = 0; step < k; ++step) {
    std::vector<std::pair<int, BigInt>> next;
    std::vector<std::pair<int, BigInt>> stack(pieces);
    while (!stack.empty()) {
      auto [w, x] = stack.back();
      stack.pop_back();
      if (x < g.height(w) - 1) {
        next.emplace_back(w, x + 1);
      } else {
        if (w >= g.depth())
          throw DepthError("flow_correlation: prefix too shallow at column " + std::to_string(w));
        for (const BigInt& t : g.offset_set(w)) stack.emplace_back(w + 1, x + t);
      }
    }
    pieces = std::move(next);
  }
  Rational total = 0;
  for (const auto& [w, x] : pieces) total += level_overlap_measure(g, w, x, A);
  return total;
}

}  // namespace rankone
