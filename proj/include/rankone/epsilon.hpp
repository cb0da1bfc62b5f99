#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "rankone/diff_hist.hpp"
#include "rankone/geometry.hpp"

namespace rankone {

// The base-3^c digit machinery is defined only for towers with
// H_i = {0, h_i, 2 h_i + 1} and h_{i+1} = 3^c h_i, c >= 2.
struct PowerTower {
  const TowerGeometry* geom = nullptr;
  unsigned exponent = 0;  // c
};

inline PowerTower require_power_tower(const TowerGeometry& g) {
  if (g.depth() < 1) throw PreconditionError("power tower: empty prefix");
  PowerTower pt;
  pt.geom = &g;
  BigInt factor = g.height(1);  // h_0 = 1, so h_1 = 3^c
  unsigned c = 0;
  BigInt f = factor;
  while (f % 3 == 0) {
    f /= 3;
    ++c;
  }
  if (f != 1 || c < 2 || big_pow(3, c) != factor)
    throw PreconditionError("power tower: h_1 = " + factor.str() + " is not 3^c with c >= 2");
  pt.exponent = c;
  for (int n = 0; n < g.depth(); ++n) {
    const StageSpec& st = g.stages[n];
    bool shape = st.cuts == 3 && st.spacers[0] == 0 && st.spacers[1] == 1;
    if (!shape || g.height(n + 1) != factor * g.height(n))
      throw PreconditionError("power tower: stage " + std::to_string(n) +
                              " does not have the 3^c growth shape");
  }
  return pt;
}

// Signed digit-difference vector of a descendant pair, entries in {-2..2}.
struct EpsilonVector {
  int base_stage = 0;
  std::vector<int> entries;  // entries[i] for stage base_stage + i

  int length() const { return static_cast<int>(entries.size()); }
  int count(int value) const {
    int c = 0;
    for (int e : entries)
      if (e == value) ++c;
    return c;
  }
  int zeros() const { return count(0); }                      // a_0
  int ones() const { return count(1) + count(-1); }           // a_1 + a_{-1}
  std::string text() const {
    std::string s;
    for (int e : entries) {
      if (!s.empty()) s += ',';
      s += std::to_string(e);
    }
    return s;
  }
};

// Greedy top-down digit recovery over {0, h_i, 2 h_i + 1}; with c >= 2 the
// digits are spaced far enough apart that the choice at each stage is forced.
inline std::vector<BigInt> power_digits(const PowerTower& pt, int j, int m, BigInt value) {
  const TowerGeometry& g = *pt.geom;
  std::vector<BigInt> digits(m - j);
  for (int i = m - 1; i >= j; --i) {
    const BigInt& h = g.height(i);
    BigInt rest_cap = g.max_descendant(i) - g.max_descendant(j);
    BigInt digit;
    if (value >= 2 * h + 1 && value - (2 * h + 1) <= rest_cap)
      digit = 2 * h + 1;
    else if (value >= h && value - h <= rest_cap)
      digit = h;
    else
      digit = 0;
    value -= digit;
    digits[i - j] = digit;
  }
  if (value != 0)
    throw PreconditionError("power_digits: height is not a descendant of the base level");
  return digits;
}

inline int replaced_digit_rank(const BigInt& digit, const BigInt& h) {
  if (digit == 0) return 0;
  if (digit == h) return 1;
  return 2;  // 2h + 1, replaced by 2h
}

inline EpsilonVector g_map(const PowerTower& pt, int j, int m, const BigInt& d,
                           const BigInt& d_prime) {
  const TowerGeometry& g = *pt.geom;
  std::vector<BigInt> xd = power_digits(pt, j, m, d);
  std::vector<BigInt> xq = power_digits(pt, j, m, d_prime);
  EpsilonVector out;
  out.base_stage = j;
  out.entries.resize(m - j);
  for (int i = 0; i < m - j; ++i) {
    const BigInt& h = g.height(j + i);
    out.entries[i] = replaced_digit_rank(xd[i], h) - replaced_digit_rank(xq[i], h);
  }
  return out;
}

// Multiplicity function: for each k, the number of descendant pairs with
// digit-difference vector eps and d - d' = k.
struct MultiplicityFn {
  EpsilonVector eps;
  std::map<BigInt, BigInt> support;  // k -> count, sorted

  BigInt total() const {
    BigInt t = 0;
    for (const auto& [k, c] : support) t += c;
    return t;
  }
  BigInt at(const BigInt& k) const {
    auto it = support.find(k);
    return it == support.end() ? BigInt(0) : it->second;
  }
};

inline MultiplicityFn multiplicity(const PowerTower& pt, int j, int m, const EpsilonVector& eps,
                                   int enumeration_cap = 6) {
  if (m - j != eps.length()) throw PreconditionError("multiplicity: vector length mismatch");
  if (m - j > enumeration_cap)
    throw BudgetError("multiplicity: m - j = " + std::to_string(m - j) + " exceeds cap " +
                      std::to_string(enumeration_cap));
  const TowerGeometry& g = *pt.geom;
  MultiplicityFn out;
  out.eps = eps;
  // digit-pair options per entry: 3 for 0, 2 for +-1, 1 for +-2
  std::vector<std::vector<BigInt>> deltas(eps.length());
  for (int i = 0; i < eps.length(); ++i) {
    const BigInt& h = g.height(j + i);
    switch (eps.entries[i]) {
      case 0: deltas[i] = {0};                       // d_i = d_i', three ways
        break;
      case 1: deltas[i] = {h, h + 1};                // h-0, (2h+1)-h
        break;
      case -1: deltas[i] = {-h, -h - 1};
        break;
      case 2: deltas[i] = {2 * h + 1};               // (2h+1)-0
        break;
      case -2: deltas[i] = {-2 * h - 1};
        break;
      default: throw PreconditionError("multiplicity: entry outside {-2..2}");
    }
  }
  // depth-first accumulation; diagonal entries carry weight 3
  struct Frame { BigInt sum; int idx; BigInt weight; };
  std::vector<Frame> stack{{BigInt(0), 0, BigInt(1)}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.idx == eps.length()) {
      out.support[f.sum] += f.weight;
      continue;
    }
    BigInt w = eps.entries[f.idx] == 0 ? 3 : 1;
    for (const BigInt& d : deltas[f.idx]) stack.push_back({f.sum + d, f.idx + 1, f.weight * w});
  }
  return out;
}

// Enumerate all 5^(m-j) vectors.
inline std::vector<EpsilonVector> all_epsilon_vectors(int j, int m, int enumeration_cap = 6) {
  if (m - j > enumeration_cap)
    throw BudgetError("epsilon enumeration: m - j exceeds cap " +
                      std::to_string(enumeration_cap));
  std::vector<EpsilonVector> out;
  const int len = m - j;
  std::vector<int> cur(len, -2);
  for (;;) {
    EpsilonVector v;
    v.base_stage = j;
    v.entries = cur;
    out.push_back(std::move(v));
    int i = 0;
    while (i < len && cur[i] == 2) cur[i++] = -2;
    if (i == len) break;
    ++cur[i];
  }
  return out;
}

struct Lemma62Report {
  bool sum_over_eps_matches_histogram = true;  // (a), every k
  bool totals_match_profile = true;            // (b), every eps
  int vectors_checked = 0;
};

inline Lemma62Report lemma62_check(const PowerTower& pt, int j, int m, int enumeration_cap = 6) {
  const TowerGeometry& g = *pt.geom;
  Lemma62Report rep;
  std::map<BigInt, BigInt> total;
  for (const EpsilonVector& eps : all_epsilon_vectors(j, m, enumeration_cap)) {
    MultiplicityFn mf = multiplicity(pt, j, m, eps, enumeration_cap);
    BigInt expect = big_pow(3, eps.zeros()) * big_pow(2, eps.ones());
    if (mf.total() != expect) rep.totals_match_profile = false;
    for (const auto& [k, c] : mf.support) total[k] += c;
    ++rep.vectors_checked;
  }
  BigInt window = g.max_descendant(m) - g.max_descendant(j);
  DiffHistogram hist = windowed_diff_hist(g, j, m, window);
  std::map<BigInt, BigInt> histmap(hist.counts.begin(), hist.counts.end());
  if (total != histmap) rep.sum_over_eps_matches_histogram = false;
  return rep;
}

struct BinomialProfileReport {
  bool support_is_interval = true;
  bool values_match = true;
  BigInt min_support;
  int width = 0;  // a_1 + a_{-1}
};

inline BinomialProfileReport binomial_profile_check(const PowerTower& pt, int j, int m,
                                                    const EpsilonVector& eps,
                                                    int enumeration_cap = 6) {
  MultiplicityFn mf = multiplicity(pt, j, m, eps, enumeration_cap);
  BinomialProfileReport rep;
  rep.width = eps.ones();
  rep.min_support = mf.support.begin()->first;
  BigInt scale = big_pow(3, eps.zeros());
  for (int k = 0; k <= rep.width; ++k) {
    BigInt expect = scale * binomial(static_cast<unsigned>(rep.width), static_cast<unsigned>(k));
    if (mf.at(rep.min_support + k) != expect) rep.values_match = false;
  }
  if (BigInt(static_cast<int>(mf.support.size())) != BigInt(rep.width + 1))
    rep.support_is_interval = false;
  return rep;
}

// R(eps): total variation of the multiplicity function over its total mass.
struct REpsilonReport {
  Rational value;
  Rational bound;
  bool bound_ok = false;
  int width = 0;       // n = a_1 + a_{-1}
  bool odd_case = false;  // the odd-n bound is the stated one; even n uses the
                          // evaluated peak bound recorded by this artifact
};

inline REpsilonReport r_epsilon(const MultiplicityFn& mf) {
  REpsilonReport rep;
  rep.width = mf.eps.ones();
  const BigInt lo = mf.support.begin()->first;
  const BigInt hi = mf.support.rbegin()->first;
  BigInt variation = 0;
  BigInt prev = 0;
  for (BigInt k = lo; k <= hi + 1; ++k) {
    BigInt cur = k <= hi ? mf.at(k) : BigInt(0);
    variation += big_abs(cur - prev);
    prev = cur;
  }
  rep.value = Rational(variation) / Rational(mf.total());

  const int n = rep.width;
  if (n % 2 == 1) {
    rep.odd_case = true;
    const unsigned l = static_cast<unsigned>((n + 1) / 2);
    // 2 * sum_{k<=l} C(2l,k)(l-k)/l over 2^n
    Rational s = 0;
    for (unsigned k = 0; k <= l; ++k)
      s += Rational(binomial(2 * l, k) * BigInt(l - k), BigInt(l));
    rep.bound = Rational(2) * s / Rational(big_pow(2, static_cast<unsigned>(n)));
  } else if (n > 0) {
    rep.bound = Rational(2 * binomial(static_cast<unsigned>(n), static_cast<unsigned>(n / 2))) /
                Rational(big_pow(2, static_cast<unsigned>(n)));
  } else {
    rep.bound = 2;  // single point mass: both boundary jumps
  }
  rep.bound_ok = rep.value <= rep.bound;
  return rep;
}

// d(N, m): fraction of the total multiplicity mass carried by vectors with
// fewer than N entries of absolute value one, via multinomial sums.
struct DRatioReport {
  Rational value;
  Rational bound;  // 2^N (7/9)^(m-j)
  bool bound_ok = false;
  BigInt denominator_check;  // should equal 9^(m-j)
};

inline DRatioReport d_ratio(const PowerTower& pt, int j, int m, int N) {
  (void)pt;  // shape already validated by require_power_tower
  const int len = m - j;
  BigInt num = 0, den = 0;
  for (int a0 = 0; a0 <= len; ++a0)
    for (int a1 = 0; a1 + a0 <= len; ++a1)
      for (int am1 = 0; am1 + a1 + a0 <= len; ++am1)
        for (int a2 = 0; a2 + am1 + a1 + a0 <= len; ++a2) {
          int am2 = len - a0 - a1 - am1 - a2;
          BigInt count = factorial(static_cast<unsigned>(len)) /
                         (factorial(a0) * factorial(a1) * factorial(am1) * factorial(a2) *
                          factorial(am2));
          BigInt mass = count * big_pow(3, a0) * big_pow(2, a1 + am1);
          den += mass;
          if (a1 + am1 < N) num += mass;
        }
  DRatioReport rep;
  rep.value = Rational(num) / Rational(den);
  rep.denominator_check = den;
  rep.bound = Rational(big_pow(2, static_cast<unsigned>(N)) * big_pow(7, len),
                       big_pow(9, len));
  rep.bound_ok = rep.value <= rep.bound;
  return rep;
}

}  // namespace rankone
