#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankone/classify.hpp"
#include "rankone/correlation.hpp"

namespace rankone {

// ---------------------------------------------------------------------------
// Intrinsic weights u_k(F) = mu(F cap T^k F) / mu(F)^2 and partial sums.
// ---------------------------------------------------------------------------

struct WeightSeries {
  LevelSet F;
  std::vector<Rational> u;        // u_k for 0 <= k < n
  std::vector<Rational> partial;  // partial[k] = a_{k+1}(F) = sum of u_0..u_k

  const Rational& a_n() const { return partial.back(); }
};

inline WeightSeries weights(CorrelationEngine& eng, const LevelSet& F, const BigInt& n) {
  if (n <= 0) throw PreconditionError("weights: need n >= 1");
  WeightSeries out;
  out.F = F;
  Rational muF = level_set_measure(eng.geometry(), F);
  Rational muF2 = muF * muF;
  CorrelationEngine::Series s = eng.correlation_series(F, F, n - 1);
  Rational acc = 0;
  for (const auto& e : s.entries) {
    if (e.k < 0) continue;
    Rational u = e.mu / muF2;
    acc += u;
    out.u.push_back(u);
    out.partial.push_back(acc);
  }
  return out;
}

// a_n(I) for the unit interval, computed by one cumulative range query.
inline Rational unit_partial_sum(CorrelationEngine& eng, const BigInt& n,
                                 std::optional<int> stage_override = {}) {
  return eng.correlation_prefix_sum(unit_interval(), unit_interval(), n, stage_override);
}

// ---------------------------------------------------------------------------
// Ratio-ergodicity quotient and the mixing deficit.
// ---------------------------------------------------------------------------

struct DeficitReport {
  LevelSet A, B;
  BigInt n;
  Rational quotient;  // value of the normalized sum
  Rational target;    // mu(A) mu(B) for the plain quotient, 0 for the deficit
};

inline DeficitReport wre_quotient(CorrelationEngine& eng, const LevelSet& A, const LevelSet& B,
                                  const BigInt& n, std::optional<int> stage_override = {}) {
  DeficitReport rep;
  rep.A = A;
  rep.B = B;
  rep.n = n;
  Rational numer = eng.correlation_prefix_sum(A, B, n, stage_override);
  Rational a_n = unit_partial_sum(eng, n, stage_override);
  rep.quotient = numer / a_n;
  rep.target = level_set_measure(eng.geometry(), A) * level_set_measure(eng.geometry(), B);
  return rep;
}

// phi_n(A, B) with F = I: (1/a_n(I)) sum_{k<n} |mu(A cap T^k B) - mu(A)mu(B) u_k(I)|.
// Terms vanish off the union of the two supports, so only those k are visited.
inline DeficitReport rwm_deficit(CorrelationEngine& eng, const LevelSet& A, const LevelSet& B,
                                 const BigInt& n, std::optional<int> stage_override = {}) {
  DeficitReport rep;
  rep.A = A;
  rep.B = B;
  rep.n = n;
  rep.target = 0;
  const TowerGeometry& g = eng.geometry();
  Rational muA = level_set_measure(g, A);
  Rational muB = level_set_measure(g, B);
  LevelSet I = unit_interval();

  std::vector<BigInt> ks = eng.support_in(A, B, 0, n - 1, stage_override);
  std::vector<BigInt> ksI = eng.support_in(I, I, 0, n - 1, stage_override);
  ks.insert(ks.end(), ksI.begin(), ksI.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  Rational total = 0;
  for (const BigInt& k : ks) {
    Rational muAB = eng.correlation(A, B, k, stage_override);
    Rational u_k = eng.correlation(I, I, k, stage_override);  // mu(I) = 1
    Rational term = muAB - muA * muB * u_k;
    if (term < 0) term = -term;
    total += term;
  }
  rep.quotient = total / unit_partial_sum(eng, n, stage_override);
  return rep;
}

// ---------------------------------------------------------------------------
// Support obstruction behind the not-rationally-weakly-mixing results: for
// J2 = T^d J1 the autocorrelation and cross-correlation supports of J1 are
// disjoint on the window.
// ---------------------------------------------------------------------------

struct SupportObstruction {
  bool disjoint = true;
  std::vector<BigInt> violations;  // k with both correlations nonzero
};

inline SupportObstruction support_obstruction(CorrelationEngine& eng, int j, const BigInt& d,
                                              const BigInt& window) {
  LevelSet j1 = bottom_level(j + 1);
  CorrelationEngine::Reduced r = eng.reduce(j1, j1);
  int N = eng.valid_stage(r, window + 1 + big_abs(d));
  const DiffHistogram& f = eng.histogram(j + 1, N, window + big_abs(d));
  SupportObstruction out;
  for (const auto& [k, c] : f.counts) {
    if (c == 0 || k < -window || k > window) continue;
    if (f.count(k + d) != 0) {
      out.disjoint = false;
      out.violations.push_back(k);
    }
  }
  return out;
}

// The halved-column family: r_n = 2, s_{n,0} = 0, s_{n,1} >= 2 h_n. J1, J2
// are the two subcolumn copies of the bottom level of column j one stage
// deeper, so d = h_j.
inline SupportObstruction disjoint_support_check(CorrelationEngine& eng, int j,
                                                 const BigInt& window) {
  const TowerGeometry& g = eng.geometry();
  for (int n = 0; n < g.depth(); ++n) {
    const StageSpec& st = g.stages[n];
    if (st.cuts != 2 || st.spacers[0] != 0 || st.spacers[1] < 2 * g.height(n))
      throw PreconditionError(
          "disjoint_support_check: stage " + std::to_string(n) +
          " is not of the halved-column form (r = 2, s0 = 0, s1 >= 2 h)");
  }
  return support_obstruction(eng, j, g.height(j), window);
}

// ---------------------------------------------------------------------------
// Second-moment (Renyi) ratio along n = M_m + 1, two independent routes.
// ---------------------------------------------------------------------------

struct RenyiReport {
  int m = 0;
  BigInt n;                // M_m + 1
  Rational ratio_closed;   // N * sum(l^2) / (sum l)^2 over descendant ranks
  Rational ratio_counted;  // from per-level visit counts of the ergodic sum
  bool routes_agree = false;
  bool bound_ok = false;  // ratio <= 2
};

inline void require_exponential_growth(const TowerGeometry& g, int m) {
  if (m < 1 || m > g.depth()) throw PreconditionError("bad stage count");
  for (int n = 0; n < m; ++n)
    if (2 * g.stages[n].spacers.back() < g.height(n + 1))
      throw PreconditionError("prefix does not grow exponentially at stage " + std::to_string(n));
}

inline RenyiReport renyi_ratio(CorrelationEngine& eng, int m) {
  const TowerGeometry& g = eng.geometry();
  require_exponential_growth(g, m);
  RenyiReport rep;
  rep.m = m;
  rep.n = g.max_descendant(m) + 1;

  BigInt N = g.descendant_count(0, m);
  BigInt sum_l = N * (N + 1) / 2;
  BigInt sum_l2 = N * (N + 1) * (2 * N + 1) / 6;
  rep.ratio_closed = Rational(N * sum_l2) / Rational(sum_l * sum_l);

  // independent count: S_n(1_I) on a descendant level at height x equals the
  // number of descendants in [x, x + n - 1]
  DescendantSet d = descendants(g, Level{0, 0}, m, eng.options().size_budget);
  BigInt sum_c = 0, sum_c2 = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < d.heights.size(); ++lo) {
    if (hi < lo) hi = lo;
    while (hi < d.heights.size() && d.heights[hi] <= d.heights[lo] + rep.n - 1) ++hi;
    BigInt c = hi - lo;
    sum_c += c;
    sum_c2 += c * c;
  }
  Rational wm = g.width(m);
  Rational integral = wm * sum_c;
  rep.ratio_counted = (wm * sum_c2) / (integral * integral);

  rep.routes_agree = rep.ratio_closed == rep.ratio_counted;
  rep.bound_ok = rep.ratio_counted <= 2;
  return rep;
}

// ---------------------------------------------------------------------------
// Sup-norm profile of S_n(1_I)/a_n(I) along n = M_{m'} + 1.
// ---------------------------------------------------------------------------

struct SupNormPoint {
  int m = 0;
  BigInt n;
  BigInt sup;    // sup of S_n(1_I) over I (attained on the lowest descendant)
  Rational a_n;  // a_n(I)
  Rational ratio;
};

inline std::vector<SupNormPoint> sup_norm_profile(CorrelationEngine& eng, int m) {
  const TowerGeometry& g = eng.geometry();
  require_exponential_growth(g, m);
  std::vector<SupNormPoint> out;
  for (int mm = 1; mm <= m; ++mm) {
    SupNormPoint p;
    p.m = mm;
    p.n = g.max_descendant(mm) + 1;
    DescendantSet d = descendants(g, Level{0, 0}, mm, eng.options().size_budget);
    BigInt sup = 0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < d.heights.size(); ++lo) {
      if (hi < lo) hi = lo;
      while (hi < d.heights.size() && d.heights[hi] <= d.heights[lo] + p.n - 1) ++hi;
      sup = std::max(sup, BigInt(hi - lo));
    }
    p.sup = sup;
    p.a_n = unit_partial_sum(eng, p.n);
    p.ratio = Rational(sup) / p.a_n;
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// P/Q/R statistics for the deficit lower-bound recursion.
// ---------------------------------------------------------------------------

struct PQRTriple {
  int m = 0;
  int j = 0;
  BigInt d;
  Rational P, Q, R;
};

inline PQRTriple pqr(CorrelationEngine& eng, int j, const BigInt& d, int m) {
  const TowerGeometry& g = eng.geometry();
  // d must be a difference of stage-j offsets
  bool d_ok = false;
  for (const BigInt& x : g.offset_set(j))
    for (const BigInt& y : g.offset_set(j))
      if (x - y == d) d_ok = true;
  if (!d_ok) throw PreconditionError("pqr: shift d is not a difference of stage offsets");

  PQRTriple out;
  out.m = m;
  out.j = j;
  out.d = d;
  const BigInt window = g.max_descendant(m);
  LevelSet j1 = bottom_level(j + 1);
  CorrelationEngine::Reduced r = eng.reduce(j1, j1);
  int N = eng.valid_stage(r, window + 1 + big_abs(d));
  const DiffHistogram& f = eng.histogram(j + 1, N, window + big_abs(d));

  std::vector<BigInt> ks;
  for (const auto& [k, c] : f.counts) {
    if (k >= -window && k <= window) ks.push_back(k);
    if (k - d >= -window && k - d <= window) ks.push_back(k - d);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  BigInt pnum = 0;
  for (const BigInt& k : ks) pnum += big_abs(f.count(k) - f.count(k + d));
  Rational wN = g.width(N);
  out.P = wN * pnum;
  out.Q = wN * f.total_range(-window, window);
  out.R = out.Q == 0 ? Rational(0) : out.P / out.Q;
  return out;
}

// ---------------------------------------------------------------------------
// Zero-type decay: representation product formula against the histogram.
// ---------------------------------------------------------------------------

struct ZeroTypeEntry {
  BigInt k;
  Rational mu_histogram;
  Rational mu_formula;
};

struct ZeroTypeReport {
  int stage = 0;  // histogram stage N
  std::vector<ZeroTypeEntry> entries;
  bool formula_matches = true;
  bool decay_bound_ok = true;            // mu <= 1/r_n for all k > M_n in range
  std::vector<std::string> bound_notes;  // which (n, k) violated, when any
};

// mu(I cap T^k I) from the unique steep representation: 1 over the product of
// the cut counts of the stages whose digits differ; 0 when k has no stagewise
// pair representation.
inline std::optional<Rational> representation_mu(const TowerGeometry& g, const BigInt& k, int m) {
  std::optional<SignedDecomposition> rep = steep_decompose(g, k, m);
  if (!rep) return std::nullopt;
  // group coefficients by stage; each stage may carry at most one +1 and one
  // -1 (a difference of two of its offsets)
  std::vector<int> pos(m, 0), neg(m, 0);
  for (const auto& [t, c] : rep->terms) {
    int stage = -1;
    for (int i = 0; i < m && stage < 0; ++i)
      for (const BigInt& o : g.offset_set(i))
        if (o == t) {
          stage = i;
          break;
        }
    if (stage < 0) throw Error("representation_mu: offset not found");
    (c > 0 ? pos : neg)[stage] += 1;
  }
  BigInt denom = 1;
  for (int i = 0; i < m; ++i) {
    if (pos[i] > 1 || neg[i] > 1) return std::nullopt;  // not a pairwise difference
    if (pos[i] || neg[i]) denom *= g.stages[i].cuts;
  }
  return Rational(1) / Rational(denom);
}

inline ZeroTypeReport zero_type_profile(CorrelationEngine& eng, const BigInt& k_max,
                                        int bound_stages) {
  const TowerGeometry& g = eng.geometry();
  LevelSet I = unit_interval();
  CorrelationEngine::Reduced r = eng.reduce(I, I);
  int N = eng.valid_stage(r, k_max + 1);
  if (!is_steep_prefix(g, N))
    throw PreconditionError("zero_type_profile: prefix is not steep over stages 0.." +
                            std::to_string(N - 1));
  const DiffHistogram& f = eng.histogram(0, N, k_max);
  ZeroTypeReport rep;
  rep.stage = N;
  Rational wN = g.width(N);
  for (const auto& [k, c] : f.counts) {
    if (k < 0 || k > k_max || c == 0) continue;
    ZeroTypeEntry e;
    e.k = k;
    e.mu_histogram = wN * c;
    std::optional<Rational> viaRep = representation_mu(g, k, N);
    e.mu_formula = viaRep.value_or(Rational(0));
    if (e.mu_formula != e.mu_histogram) rep.formula_matches = false;
    rep.entries.push_back(std::move(e));
  }
  for (int n = 1; n <= bound_stages; ++n) {
    Rational cap = Rational(1) / g.stages[n].cuts;
    for (const ZeroTypeEntry& e : rep.entries) {
      if (e.k > g.max_descendant(n) && e.mu_histogram > cap) {
        rep.decay_bound_ok = false;
        rep.bound_notes.push_back("mu at k = " + e.k.str() + " exceeds 1/r_" +
                                  std::to_string(n));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Double-ergodicity witness: n = h_{j+1,0} + ... + h_{j+d,0} puts both n and
// n + d among the descendant differences of the bottom level of column j.
// ---------------------------------------------------------------------------

struct WitnessReport {
  int j = 0;
  BigInt d;
  BigInt witness;
  int stage = 0;
  bool n_in_diffs = false;
  bool nd_in_diffs = false;
  bool ok() const { return n_in_diffs && nd_in_diffs; }
};

inline WitnessReport double_ergodicity_witness(CorrelationEngine& eng, int j, const BigInt& d) {
  const TowerGeometry& g = eng.geometry();
  if (d < 0) throw PreconditionError("double_ergodicity_witness: d must be >= 0");
  int di = static_cast<int>(d);
  int N = j + di + 1;
  if (N > g.depth()) throw DepthError("double_ergodicity_witness: prefix too shallow");
  BigInt n = 0;
  for (int i = 1; i <= di; ++i) n += g.height(j + i) + g.stages[j + i].spacers[0];

  DescendantSet desc = descendants(g, Level{j, 0}, N, eng.options().size_budget);
  auto in_diffs = [&](const BigInt& v) {
    for (const BigInt& x : desc.heights)
      if (std::binary_search(desc.heights.begin(), desc.heights.end(), x + v)) return true;
    return false;
  };
  WitnessReport rep;
  rep.j = j;
  rep.d = d;
  rep.witness = n;
  rep.stage = N;
  rep.n_in_diffs = in_diffs(n);
  rep.nd_in_diffs = in_diffs(n + d);
  return rep;
}

// ---------------------------------------------------------------------------
// Adaptive construction: extend a halved-column tower one stage at a time
// until the deficit over the dyadic levels built so far drops below the
// phase tolerance, then insert a 2 h spacer block, and repeat.
// ---------------------------------------------------------------------------

struct SrwmPhase {
  int phase = 0;      // 1-based
  int stage = 0;      // realized m_i
  Rational worst_phi;
  Rational tolerance;
};

struct SrwmResult {
  std::vector<StageSpec> stages;
  std::vector<SrwmPhase> phases;
  bool success = true;
  Rational best_phi;  // best worst-phi seen in the failing phase
  int failed_phase = 0;
};

// Dyadic interval (idx/2^t, (idx+1)/2^t) as a level of column t: the binary
// digits of idx, most significant first, pick the subcolumn at each stage.
inline LevelSet dyadic_level(const TowerGeometry& g, int t, std::uint64_t idx) {
  BigInt height = 0;
  for (int s = 0; s < t; ++s) {
    if (g.stages[s].cuts != 2)
      throw PreconditionError("dyadic_level: stage " + std::to_string(s) + " is not a halving");
    if ((idx >> (t - 1 - s)) & 1ull) height += g.offset_set(s)[1];
  }
  return LevelSet{t, {height}};
}

inline SrwmResult srwm_construct(const std::vector<Rational>& tolerances, int i_max, int m_cap) {
  if (i_max < 0) throw PreconditionError("srwm_construct: i_max must be >= 0");
  SrwmResult out;
  if (i_max == 0) return out;  // pure base prefix, empty subsequence
  if (static_cast<int>(tolerances.size()) < i_max)
    throw PreconditionError("srwm_construct: need a tolerance per phase");

  std::vector<StageSpec> stages;
  auto ensure_depth = [&](int m) {
    while (static_cast<int>(stages.size()) < m) stages.push_back(StageSpec{2, {0, 1}});
  };

  int start_m = 1;
  for (int phase = 1; phase <= i_max; ++phase) {
    const Rational& tol = tolerances[phase - 1];
    bool found = false;
    Rational best;
    bool have_best = false;
    for (int m = std::max(start_m, phase); m <= m_cap; ++m) {
      ensure_depth(m);
      TowerGeometry g = derive_geometry(std::vector<StageSpec>(stages.begin(), stages.begin() + m));
      CorrelationEngine eng(g);
      Rational worst = 0;
      for (int ta = 1; ta <= phase; ++ta)
        for (std::uint64_t ia = 0; ia < (1ull << ta); ++ia)
          for (int tb = 1; tb <= phase; ++tb)
            for (std::uint64_t ib = 0; ib < (1ull << tb); ++ib) {
              DeficitReport rep = rwm_deficit(eng, dyadic_level(g, ta, ia),
                                              dyadic_level(g, tb, ib), BigInt(m));
              worst = std::max(worst, rep.quotient);
            }
      if (!have_best || worst < best) {
        best = worst;
        have_best = true;
      }
      if (worst < tol) {
        out.phases.push_back({phase, m, worst, tol});
        // spacer block: 2 h_m above the right subcolumn
        TowerGeometry gm = derive_geometry(stages);
        stages.push_back(StageSpec{2, {0, 2 * gm.height(m)}});
        start_m = m + 1;
        found = true;
        break;
      }
    }
    if (!found) {
      out.success = false;
      out.failed_phase = phase;
      out.best_phi = have_best ? best : Rational(0);
      break;
    }
  }
  out.stages = std::move(stages);
  return out;
}

}  // namespace rankone
