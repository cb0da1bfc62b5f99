#pragma once

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "rankone/epsilon.hpp"
#include "rankone/report.hpp"
#include "rankone/statistics.hpp"

namespace rankone {

// Trend tolerance for the ratio-ergodicity convergence check. The convergence
// carries no rate; this artifact constant pins the final relative deviation.
inline const Rational kTrendRelTolerance = Rational(1, 10);

namespace suites {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// Quotient (1/a_n(I)) sum_{k<n} mu(A cap T^k A) at the checkpoints
// n = M_m + 1, m = m_lo..m_hi, batched at one shared valid stage.
inline SuiteReport wre_trend(const TowerGeometry& g, const std::string& family, int m_lo = 3,
                             int m_hi = 9, CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"wre-trend", family};
  CorrelationEngine eng(g, opts);
  LevelSet A = bottom_level(1);
  Rational target =
      level_set_measure(g, A) * level_set_measure(g, A);

  const BigInt max_window = g.max_descendant(m_hi) + 1;
  CorrelationEngine::Reduced rA = eng.reduce(A, A);
  CorrelationEngine::Reduced rI = eng.reduce(unit_interval(), unit_interval());
  int N = std::max(eng.valid_stage(rA, max_window), eng.valid_stage(rI, max_window));

  Rational prev_dev;
  bool have_prev = false;
  Rational final_dev;
  for (int m = m_lo; m <= m_hi; ++m) {
    BigInt n = g.max_descendant(m) + 1;
    DeficitReport q = wre_quotient(eng, A, A, n, N);
    Rational dev = q.quotient - target;
    if (dev < 0) dev = -dev;
    if (have_prev)
      rep.add(check_le("deviation non-increasing at m=" + std::to_string(m), dev, prev_dev,
                       "|quotient - mu(A)^2| vs previous checkpoint"));
    prev_dev = dev;
    have_prev = true;
    final_dev = dev;
  }
  rep.add(check_lt("final relative deviation", final_dev / target, kTrendRelTolerance,
                   "trend check; tolerance is an artifact constant, not a stated rate"));
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport renyi(const TowerGeometry& g, const std::string& family, int m_max = 8,
                         CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"renyi", family};
  CorrelationEngine eng(g, opts);
  for (int m = 1; m <= m_max; ++m) {
    RenyiReport r = renyi_ratio(eng, m);
    rep.add(check_eq("closed form equals counted ratio at m=" + std::to_string(m),
                     r.ratio_closed, r.ratio_counted));
    rep.add(check_le("second-moment ratio <= 2 at m=" + std::to_string(m), r.ratio_counted,
                     Rational(2), "n = " + r.n.str()));
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport bre_sup(const TowerGeometry& g, const std::string& family, int m_max = 6,
                           CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"bre-sup", family};
  CorrelationEngine eng(g, opts);
  std::vector<SupNormPoint> profile = sup_norm_profile(eng, m_max);
  for (const SupNormPoint& p : profile) {
    BigInt dsize = g.descendant_count(0, p.m);
    rep.add(check_eq("sup of the ergodic sum equals descendant count at m=" +
                         std::to_string(p.m),
                     Rational(p.sup), Rational(dsize), "n = " + p.n.str()));
    rep.add(check_le("sup-norm quotient bounded at m=" + std::to_string(p.m), p.ratio,
                     Rational(2), "sup S_n(1_I) / a_n(I)"));
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport t32_support(const TowerGeometry& g, const std::string& family, int j_max = 2,
                               int window_stage = 5, CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"t32-support", family};
  CorrelationEngine eng(g, opts);
  const BigInt window = g.max_descendant(window_stage);
  for (int j = 0; j <= j_max; ++j) {
    SupportObstruction so = disjoint_support_check(eng, j, window);
    rep.add(check_true("disjoint correlation supports at j=" + std::to_string(j), so.disjoint,
                       so.disjoint ? "" : "violations at " + std::to_string(so.violations.size()) +
                                              " shifts"));
    // term-by-term: |u_k(J1) - u_k(J1,J2)| >= u_k(J1) over the window
    LevelSet j1 = bottom_level(j + 1);
    LevelSet j2{j + 1, {g.height(j)}};
    Rational mu1 = level_set_measure(g, j1);
    bool termwise = true;
    std::vector<BigInt> ks = eng.support_in(j1, j1, -window, window);
    std::vector<BigInt> ks2 = eng.support_in(j1, j2, -window, window);
    ks.insert(ks.end(), ks2.begin(), ks2.end());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (const BigInt& k : ks) {
      Rational u_auto = eng.correlation(j1, j1, k) / (mu1 * mu1);
      Rational u_cross = eng.correlation(j1, j2, k) / (mu1 * mu1);
      Rational diff = u_auto - u_cross;
      if (diff < 0) diff = -diff;
      if (diff < u_auto) termwise = false;
    }
    rep.add(check_true("termwise deficit dominates the weights at j=" + std::to_string(j),
                       termwise));
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

// Signed-combination uniqueness by brute force over the ordered offsets.
inline bool signed_sums_distinct(const std::vector<BigInt>& offsets, int coeff_range) {
  std::set<BigInt> seen;
  std::vector<int> coeff(offsets.size(), -coeff_range);
  for (;;) {
    BigInt s = 0;
    for (std::size_t i = 0; i < offsets.size(); ++i) s += coeff[i] * offsets[i];
    if (!seen.insert(s).second) return false;
    std::size_t i = 0;
    while (i < coeff.size() && coeff[i] == coeff_range) coeff[i++] = -coeff_range;
    if (i == coeff.size()) break;
    ++coeff[i];
  }
  return true;
}

inline SuiteReport t34_steep(const TowerGeometry& g, const std::string& family,
                             int offsets_count, int coeff_range, int obstruction_j_max = 1,
                             CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"t34-steep", family};
  int threshold = coeff_range >= 2 ? 5 : 4;
  int m = 0;
  {
    int seen = 0;
    while (m < g.depth() && seen < offsets_count) {
      seen += static_cast<int>(g.offset_set(m).size()) - 1;
      ++m;
    }
  }
  rep.add(check_true("prefix is steep at ratio " + std::to_string(threshold),
                     is_steep_prefix(g, m, threshold)));
  std::vector<BigInt> offs = ordered_offsets(g, m);
  offs.resize(std::min<std::size_t>(offs.size(), offsets_count));
  rep.add(check_true("all signed combinations distinct over " +
                         std::to_string(offs.size()) + " offsets, coefficients within " +
                         std::to_string(coeff_range),
                     signed_sums_distinct(offs, coeff_range)));
  CorrelationEngine eng(g, opts);
  const BigInt window = g.max_descendant(std::min(3, g.depth()));
  for (int j = 0; j <= obstruction_j_max; ++j) {
    bool all_ok = true;
    for (const BigInt& x : g.offset_set(j))
      for (const BigInt& y : g.offset_set(j)) {
        if (x == y) continue;
        SupportObstruction so = support_obstruction(eng, j, x - y, window);
        if (!so.disjoint) all_ok = false;
      }
    rep.add(check_true("support obstruction for every stage-" + std::to_string(j) + " shift",
                       all_ok));
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport t43_recursion(int m_max = 4, CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"t43-recursion", "almost_steep r_n=n+3"};
  std::vector<StageSpec> stages =
      make_almost_steep_stages(m_max + 2, [](std::size_t n) { return static_cast<int>(n) + 3; });
  TowerGeometry g = derive_geometry(stages);
  CorrelationEngine eng(g, opts);
  const BigInt d = 1;  // difference of stage-0 offsets (1 - 0)

  std::vector<PQRTriple> t;
  for (int m = 1; m <= m_max + 1; ++m) t.push_back(pqr(eng, 0, d, m));
  for (int m = 1; m <= m_max; ++m) {
    const int r_m = g.stages[m].cuts;
    rep.add(check_eq("Q recursion at m=" + std::to_string(m), t[m].Q, Rational(r_m) * t[m - 1].Q,
                     "Q_{m+1} = r_m Q_m"));
    Rational factor = Rational(1) - Rational(1, r_m) - Rational(2, BigInt(r_m) * r_m);
    rep.add(check_ge("R recursion at m=" + std::to_string(m), t[m].R, factor * t[m - 1].R,
                     "R_{m+1} >= (1 - 1/r - 2/r^2) R_m"));
  }
  // off-diagonal non-excluded pair count per stage
  for (int m = 1; m <= m_max; ++m) {
    const StageSpec& st = g.stages[m];
    const int r = st.cuts;
    BigInt b0 = g.height(m) + st.spacers[0];
    BigInt b1 = b0 + g.height(m) + st.spacers[1];
    int count = 0;
    for (const BigInt& a : g.offset_set(m))
      for (const BigInt& b : g.offset_set(m)) {
        if (a == b) continue;
        bool excluded = (a == b0 || a == b1) && (b == b0 || b == b1);
        if (!excluded) ++count;
      }
    rep.add(check_eq("admissible pair count at m=" + std::to_string(m), Rational(count),
                     Rational(BigInt(r) * r - r - 2), "|A_m| = r^2 - r - 2"));
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport l44_witness(const TowerGeometry& g, const std::string& family,
                               CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"l44-witness", family};
  CorrelationEngine eng(g, opts);
  for (int j : {0, 1})
    for (BigInt d : {BigInt(0), BigInt(1), BigInt(2)}) {
      WitnessReport w = double_ergodicity_witness(eng, j, d);
      rep.add(check_true("witness works at j=" + std::to_string(j) + ", d=" + d.str(), w.ok(),
                         "n = " + w.witness.str()));
    }
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport t51_zerotype(CorrOptions opts = {}) {
  Timer timer;
  SuiteReport rep{"t51-zerotype", "steep r_n=n+2"};
  std::vector<StageSpec> stages =
      make_steep_stages(8, [](std::size_t n) { return static_cast<int>(n) + 2; });
  TowerGeometry g = derive_geometry(stages);
  CorrelationEngine eng(g, opts);
  // every k in D(I,3) - D(I,3), via the histogram support
  const BigInt k_max = g.max_descendant(3);
  ZeroTypeReport z = zero_type_profile(eng, k_max, 3);
  rep.add(check_true("representation formula equals histogram for all k", z.formula_matches,
                     std::to_string(z.entries.size()) + " support points"));
  rep.add(check_true("decay bound mu <= 1/r_n for k > M_n, n <= 3", z.decay_bound_ok));
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport t61_lemma62(int m_max = 5, CorrOptions opts = {}) {
  Timer timer;
  (void)opts;
  SuiteReport rep{"t61-lemma62", "power_family c=2"};
  TowerGeometry g = derive_geometry(make_power(2).expand(m_max + 1));
  PowerTower pt = require_power_tower(g);
  for (int m = 1; m <= m_max; ++m) {
    Lemma62Report l = lemma62_check(pt, 0, m);
    rep.add(check_true("per-shift multiplicity totals match the histogram at m=" +
                           std::to_string(m),
                       l.sum_over_eps_matches_histogram,
                       std::to_string(l.vectors_checked) + " vectors"));
    rep.add(check_true("per-vector mass equals 3^a0 2^(a1+a-1) at m=" + std::to_string(m),
                       l.totals_match_profile));
    bool profile_ok = true;
    for (const EpsilonVector& eps : all_epsilon_vectors(0, m)) {
      BinomialProfileReport b = binomial_profile_check(pt, 0, m, eps);
      if (!b.support_is_interval || !b.values_match) profile_ok = false;
    }
    rep.add(check_true("binomial profile for all vectors at m=" + std::to_string(m), profile_ok));
  }
  // frozen m-j = 1 example: eps = (1) has multiplicity {1:1, 2:1}
  EpsilonVector e1{0, {1}};
  MultiplicityFn mf = multiplicity(pt, 0, 1, e1);
  rep.add(check_true("multiplicity of (1) is {1:1, 2:1}",
                     mf.support.size() == 2 && mf.at(1) == 1 && mf.at(2) == 1));
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport t61_dbound(int mj_max = 6, int n_max = 3, int l_max = 12,
                              CorrOptions opts = {}) {
  Timer timer;
  (void)opts;
  SuiteReport rep{"t61-dbound", "power_family c=2"};
  TowerGeometry g = derive_geometry(make_power(2).expand(mj_max + 1));
  PowerTower pt = require_power_tower(g);
  for (int mj = 1; mj <= mj_max; ++mj)
    for (int N = 0; N <= n_max; ++N) {
      DRatioReport d = d_ratio(pt, 0, mj, N);
      rep.add(check_le("d(" + std::to_string(N) + "," + std::to_string(mj) + ") within bound",
                       d.value, d.bound, "bound 2^N (7/9)^(m-j)"));
      if (d.denominator_check != big_pow(9, static_cast<unsigned>(mj)))
        rep.add(check_true("multinomial total is 9^(m-j)", false));
    }
  rep.add(check_eq("d(1,1)", d_ratio(pt, 0, 1, 1).value, Rational(5, 9)));
  rep.add(check_eq("d(1,2)", d_ratio(pt, 0, 2, 1).value, Rational(25, 81)));
  for (int l = 1; l <= l_max; ++l) {
    Rational lhs = 0;
    for (int k = 0; k <= l; ++k)
      lhs += Rational(binomial(2 * l, k) * BigInt(l - k), BigInt(l));
    Rational rhs = Rational(BigInt(l + 1) * binomial(2 * l, l + 1), BigInt(2 * l));
    rep.add(check_eq("central binomial identity at l=" + std::to_string(l), lhs, rhs));
  }
  // R(eps) bounds and profile-invariance over all vectors up to length 4
  for (int mj = 1; mj <= 4; ++mj) {
    bool bounds_ok = true;
    std::map<std::pair<int, int>, Rational> by_profile;
    bool profile_invariant = true;
    for (const EpsilonVector& eps : all_epsilon_vectors(0, mj)) {
      MultiplicityFn mf = multiplicity(pt, 0, mj, eps);
      REpsilonReport r = r_epsilon(mf);
      if (!r.bound_ok) bounds_ok = false;
      auto key = std::make_pair(eps.zeros(), eps.ones());
      auto it = by_profile.find(key);
      if (it == by_profile.end())
        by_profile.emplace(key, r.value);
      else if (it->second != r.value)
        profile_invariant = false;
    }
    rep.add(check_true("total-variation ratio bounds hold at m-j=" + std::to_string(mj),
                       bounds_ok));
    rep.add(check_true("ratio depends only on the entry profile at m-j=" + std::to_string(mj),
                       profile_invariant));
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

inline SuiteReport srwm_search(int i_max = 1, int m_cap = 20, CorrOptions opts = {}) {
  Timer timer;
  (void)opts;
  SuiteReport rep{"srwm-search", "adaptive halved-column"};
  std::vector<Rational> tols;
  for (int i = 1; i <= i_max; ++i) tols.push_back(Rational(1, big_pow(2, i)));
  SrwmResult r = srwm_construct(tols, i_max, m_cap);
  rep.add(check_true("every phase found a stage within the cap", r.success,
                     r.success ? "" : "best deficit " + fraction_string(r.best_phi)));
  for (const SrwmPhase& p : r.phases) {
    rep.add(check_lt("phase " + std::to_string(p.phase) + " deficit below tolerance at stage " +
                         std::to_string(p.stage),
                     p.worst_phi, p.tolerance));
  }
  rep.elapsed_ms = timer.ms();
  return rep;
}

}  // namespace suites
}  // namespace rankone
