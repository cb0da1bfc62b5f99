#pragma once

#include <algorithm>
#include <string>

#include "rankone/geometry.hpp"

namespace rankone {

// Three-valued verdict: asymptotic conditions may not be determinable from a
// finite prefix.
enum class Verdict { yes, no, indeterminate };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

struct FlagReport {
  Verdict value = Verdict::indeterminate;
  int stages_checked = 0;  // verdict is scoped to stages 0..stages_checked-1
  std::string note;
};

struct PropertyFlags {
  FlagReport normal;              // last spacer positive at every built stage
  FlagReport exponential_growth;  // 2 s_{n,r-1} >= h_{n+1} at every built stage
  FlagReport bounded_cuts;        // sup r_n over prefix (+ asymptotic attribute)
  int sup_cuts = 0;
  FlagReport steep;  // consecutive ordered-offset ratios >= threshold
  int steep_threshold = 4;
  FlagReport almost_steep;
};

inline PropertyFlags classify(const ConstructionSpec& spec, int m, int steep_threshold = 4) {
  if (m < 1) throw PreconditionError("classify: need at least one stage");
  TowerGeometry g = derive_geometry(spec, static_cast<std::size_t>(m));
  PropertyFlags f;
  f.steep_threshold = steep_threshold;

  bool normal = true, expo = true;
  int sup = 0;
  for (int n = 0; n < m; ++n) {
    const StageSpec& st = g.stages[n];
    sup = std::max(sup, st.cuts);
    if (st.spacers.back() <= 0) normal = false;
    if (2 * st.spacers.back() < g.height(n + 1)) expo = false;
  }
  f.normal = {normal ? Verdict::yes : Verdict::no, m,
              "prefix proxy for the asymptotic condition"};
  f.exponential_growth = {expo ? Verdict::yes : Verdict::no, m, ""};
  f.sup_cuts = sup;
  AsymptoticAttributes attrs = spec.asymptotics();
  f.bounded_cuts = {attrs.known ? (attrs.bounded_cuts ? Verdict::yes : Verdict::no)
                                : Verdict::indeterminate,
                    m, "sup over prefix = " + std::to_string(sup)};
  if (attrs.known && attrs.normal && !normal)
    f.normal.note += "; family rule is asymptotically normal";

  f.steep = {is_steep_prefix(g, m, steep_threshold) ? Verdict::yes : Verdict::no, m, ""};

  // Almost steep: r_n >= 3, s_{n,0} = 0, s_{n,1} = 1, and every later partial
  // subcolumn sum at least quadruples the previous one.
  bool almost = true;
  for (int n = 0; n < m && almost; ++n) {
    const StageSpec& st = g.stages[n];
    if (st.cuts < 3 || st.spacers[0] != 0 || st.spacers[1] != 1) {
      almost = false;
      break;
    }
    BigInt partial = g.height(n) + st.spacers[0];
    for (int i = 1; i < st.cuts; ++i) {
      BigInt next = partial + g.height(n) + st.spacers[i];
      if (i >= 2 && next < 4 * partial) {
        almost = false;
        break;
      }
      partial = next;
    }
  }
  f.almost_steep = {almost ? Verdict::yes : Verdict::no, m, ""};
  return f;
}

}  // namespace rankone
