#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rankone/construction.hpp"
#include "rankone/errors.hpp"
#include "rankone/numbers.hpp"

namespace rankone {

// Exact per-stage tower quantities derived from a stage prefix.
//
//   height(n)          number of levels h_n of column n       (h_0 = 1)
//   width(n)           level width w_n                        (w_0 = 1)
//   offsets(n)         sorted base offsets of the subcolumn copies of column n
//                      inside column n+1 (size = cuts of stage n, first = 0)
//   max_descendant(n)  greatest descendant height of the unit interval in
//                      column n (= sum of the largest offsets below n)
struct TowerGeometry {
  std::vector<StageSpec> stages;
  std::vector<BigInt> heights;               // size depth()+1
  std::vector<Rational> widths;              // size depth()+1
  std::vector<std::vector<BigInt>> offsets;  // size depth()
  std::vector<BigInt> max_desc;              // size depth()+1

  int depth() const { return static_cast<int>(stages.size()); }
  const BigInt& height(int n) const { return heights.at(n); }
  const Rational& width(int n) const { return widths.at(n); }
  const std::vector<BigInt>& offset_set(int n) const { return offsets.at(n); }
  const BigInt& max_descendant(int n) const { return max_desc.at(n); }

  // |D(I, n)| = prod_{i<n} r_i
  BigInt descendant_count(int from_col, int to_col) const {
    BigInt c = 1;
    for (int i = from_col; i < to_col; ++i) c *= stages.at(i).cuts;
    return c;
  }
};

inline TowerGeometry derive_geometry(std::vector<StageSpec> stage_list) {
  if (stage_list.empty()) throw ConfigError("derive_geometry: empty stage list");
  TowerGeometry g;
  g.stages = std::move(stage_list);
  g.heights = {BigInt(1)};
  g.widths = {Rational(1)};
  g.max_desc = {BigInt(0)};
  for (std::size_t n = 0; n < g.stages.size(); ++n) {
    const StageSpec& st = g.stages[n];
    const BigInt& h = g.heights.back();
    std::vector<BigInt> offs{BigInt(0)};
    BigInt acc = 0;
    for (int k = 0; k + 1 < st.cuts; ++k) {
      acc += h + st.spacers[k];
      offs.push_back(acc);
    }
    BigInt next_h = acc + h + st.spacers[st.cuts - 1];
    g.max_desc.push_back(g.max_desc.back() + offs.back());
    g.heights.push_back(next_h);
    g.widths.push_back(g.widths.back() / st.cuts);
    g.offsets.push_back(std::move(offs));
  }
  return g;
}

inline TowerGeometry derive_geometry(const ConstructionSpec& spec, std::size_t m) {
  return derive_geometry(spec.expand(m));
}

// Nonzero offsets of stages 0..m-1 in stage order; strictly increasing
// exactly when every consecutive ratio exceeds 1.
inline std::vector<BigInt> ordered_offsets(const TowerGeometry& g, int m) {
  if (m > g.depth()) throw DepthError("ordered_offsets: prefix too shallow");
  std::vector<BigInt> out;
  for (int j = 0; j < m; ++j)
    for (const BigInt& t : g.offset_set(j))
      if (t != 0) out.push_back(t);
  return out;
}

inline bool is_steep_prefix(const TowerGeometry& g, int m, int ratio = 4) {
  std::vector<BigInt> t = ordered_offsets(g, m);
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i + 1] < ratio * t[i]) return false;
  return true;
}

// Signed {-1,0,1} combination of ordered offsets summing to a target.
struct SignedDecomposition {
  std::vector<std::pair<BigInt, int>> terms;  // (offset value, coefficient), nonzero only

  BigInt sum() const {
    BigInt s = 0;
    for (const auto& [t, c] : terms) s += c * t;
    return s;
  }
};

// Greedy largest-first signed decomposition over ordered_offsets(g, m).
// With consecutive ratios >= 4 the tail sum of smaller offsets is under a
// third of the current one, which forces each greedy choice and makes the
// representation unique when one exists.
inline std::optional<SignedDecomposition> steep_decompose(const TowerGeometry& g,
                                                          const BigInt& target, int m) {
  if (!is_steep_prefix(g, m))
    throw PreconditionError("steep_decompose: prefix is not steep over stages 0.." +
                            std::to_string(m - 1));
  std::vector<BigInt> offs = ordered_offsets(g, m);
  std::vector<BigInt> tail(offs.size() + 1, 0);  // tail[i] = sum of offs[0..i-1]
  for (std::size_t i = 0; i < offs.size(); ++i) tail[i + 1] = tail[i] + offs[i];
  SignedDecomposition rep;
  BigInt rem = target;
  for (std::size_t i = offs.size(); i-- > 0;) {
    if (big_abs(rem) > tail[i]) {
      int c = rem > 0 ? 1 : -1;
      rep.terms.emplace_back(offs[i], c);
      rem -= c * offs[i];
    }
  }
  if (rem != 0) return std::nullopt;
  return rep;
}

}  // namespace rankone
