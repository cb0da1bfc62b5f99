#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rankone/errors.hpp"
#include "rankone/numbers.hpp"

namespace rankone {

// One cutting/spacer stage: cut the column into `cuts` subcolumns of equal
// width and add spacers[k] fresh levels above the k-th subcolumn.
struct StageSpec {
  int cuts = 2;
  std::vector<BigInt> spacers;

  void validate(std::size_t stage_index) const {
    if (cuts < 2)
      throw ConfigError("stage " + std::to_string(stage_index) +
                        ": cut count must be >= 2, got " + std::to_string(cuts));
    if (spacers.size() != static_cast<std::size_t>(cuts))
      throw ConfigError("stage " + std::to_string(stage_index) + ": expected " +
                        std::to_string(cuts) + " spacer entries, got " +
                        std::to_string(spacers.size()));
    for (const BigInt& s : spacers)
      if (s < 0)
        throw ConfigError("stage " + std::to_string(stage_index) +
                          ": spacer counts must be nonnegative");
  }

  bool operator==(const StageSpec& o) const { return cuts == o.cuts && spacers == o.spacers; }
};

// Spacer count as a closed-form rule of the current column height:
// sigma(n) = h_mul * h_n + add, or an explicit per-stage table. Closed forms
// keep expansion deterministic and hashable.
struct SpacerRule {
  BigInt h_mul = 0;
  BigInt add = 0;
  std::vector<BigInt> table;  // nonempty: table wins, indexed by stage

  BigInt eval(std::size_t stage, const BigInt& column_height) const {
    if (!table.empty()) {
      if (stage >= table.size())
        throw DepthError("spacer table has " + std::to_string(table.size()) +
                         " entries; stage " + std::to_string(stage) + " requested");
      return table[stage];
    }
    return h_mul * column_height + add;
  }

  std::size_t depth_limit() const {
    return table.empty() ? std::numeric_limits<std::size_t>::max() : table.size();
  }
};

enum class FamilyId {
  chacon_classic,   // (2, (0, 1)) at every stage
  hajian_kakutani,  // (2, (0, sigma(n))), sigma(n) >= 2 h_n
  chacon_like,      // (3, (0, 1, sigma(n))), sigma(n) >= 3 h_n + 1
  steep_hk,         // (2, (0, (q - 2) h_n)), q >= 4, so h_n = q^n
  power_family,     // chacon_like with s_{n,2} chosen so h_{n+1} = 3^c h_n
  explicit_stages,
};

inline const char* family_name(FamilyId id) {
  switch (id) {
    case FamilyId::chacon_classic: return "chacon_classic";
    case FamilyId::hajian_kakutani: return "hajian_kakutani";
    case FamilyId::chacon_like: return "chacon_like";
    case FamilyId::steep_hk: return "steep_hk";
    case FamilyId::power_family: return "power_family";
    case FamilyId::explicit_stages: return "explicit";
  }
  return "?";
}

struct FamilyParams {
  std::optional<SpacerRule> sigma;  // hajian_kakutani / chacon_like
  std::optional<BigInt> power_exponent;  // power_family c >= 2
  std::optional<BigInt> ratio;           // steep_hk q >= 4
};

// Asymptotic attributes carried by the closed-form rule of a named family;
// finite prefixes cannot certify these, so they are recorded statically.
struct AsymptoticAttributes {
  bool known = false;
  bool normal = false;
  bool bounded_cuts = false;
};

struct ConstructionSpec {
  FamilyId family = FamilyId::explicit_stages;
  FamilyParams params;
  std::vector<StageSpec> stages;  // explicit_stages only
  std::size_t depth_hint = 0;

  std::vector<StageSpec> expand(std::size_t m) const;
  AsymptoticAttributes asymptotics() const;
};

namespace detail {

inline BigInt stage_height_after(const BigInt& h, const StageSpec& st) {
  BigInt next = 0;
  for (const BigInt& s : st.spacers) next += h + s;
  return next;
}

}  // namespace detail

inline std::vector<StageSpec> ConstructionSpec::expand(std::size_t m) const {
  if (m > depth_hint)
    throw DepthError("requested depth " + std::to_string(m) + " exceeds depth hint " +
                     std::to_string(depth_hint));
  std::vector<StageSpec> out;
  out.reserve(m);
  BigInt h = 1;
  for (std::size_t n = 0; n < m; ++n) {
    StageSpec st;
    switch (family) {
      case FamilyId::chacon_classic:
        st = StageSpec{2, {0, 1}};
        break;
      case FamilyId::hajian_kakutani: {
        BigInt sig = params.sigma->eval(n, h);
        if (sig < 2 * h) {
          std::ostringstream os;
          os << "hajian_kakutani requires sigma(n) >= 2 h_n; at stage " << n << ": " << sig
             << " < " << 2 * h;
          throw ConfigError(os.str());
        }
        st = StageSpec{2, {0, sig}};
        break;
      }
      case FamilyId::chacon_like: {
        BigInt sig = params.sigma->eval(n, h);
        if (sig < 3 * h + 1) {
          std::ostringstream os;
          os << "chacon_like requires sigma(n) >= 3 h_n + 1; at stage " << n << ": " << sig
             << " < " << 3 * h + 1;
          throw ConfigError(os.str());
        }
        st = StageSpec{3, {0, 1, sig}};
        break;
      }
      case FamilyId::steep_hk: {
        const BigInt& q = *params.ratio;
        st = StageSpec{2, {0, (q - 2) * h}};
        break;
      }
      case FamilyId::power_family: {
        // h_{n+1} = 3 h_n + 1 + s_{n,2} = 3^c h_n.
        const BigInt& c = *params.power_exponent;
        BigInt factor = big_pow(3, static_cast<unsigned>(c));
        st = StageSpec{3, {0, 1, factor * h - 3 * h - 1}};
        break;
      }
      case FamilyId::explicit_stages:
        st = stages[n];
        break;
    }
    st.validate(n);
    out.push_back(st);
    h = detail::stage_height_after(h, st);
  }
  return out;
}

inline AsymptoticAttributes ConstructionSpec::asymptotics() const {
  AsymptoticAttributes a;
  switch (family) {
    case FamilyId::chacon_classic:
    case FamilyId::hajian_kakutani:
    case FamilyId::chacon_like:
    case FamilyId::steep_hk:
    case FamilyId::power_family:
      a.known = true;
      a.normal = true;  // every stage of these rules has a positive last spacer
      a.bounded_cuts = true;
      break;
    case FamilyId::explicit_stages:
      a.known = false;
      break;
  }
  return a;
}

inline ConstructionSpec build_family(FamilyId id, FamilyParams params = {},
                                     std::size_t depth_hint = 4096) {
  ConstructionSpec spec;
  spec.family = id;
  spec.params = std::move(params);
  spec.depth_hint = depth_hint;
  switch (id) {
    case FamilyId::chacon_classic:
      break;
    case FamilyId::hajian_kakutani:
    case FamilyId::chacon_like:
      if (!spec.params.sigma) throw ConfigError(std::string(family_name(id)) + " needs a sigma rule");
      spec.depth_hint = std::min(depth_hint, spec.params.sigma->depth_limit());
      break;
    case FamilyId::steep_hk:
      if (!spec.params.ratio || *spec.params.ratio < 4)
        throw ConfigError("steep_hk requires ratio q >= 4");
      break;
    case FamilyId::power_family:
      if (!spec.params.power_exponent || *spec.params.power_exponent < 2)
        throw ConfigError("power_family requires integer c >= 2");
      break;
    case FamilyId::explicit_stages:
      throw ConfigError("use make_explicit for explicit stage lists");
  }
  // fail fast on parameter violations
  spec.expand(std::min<std::size_t>(spec.depth_hint, 3));
  return spec;
}

inline ConstructionSpec build_family(const std::string& name, FamilyParams params = {},
                                     std::size_t depth_hint = 4096) {
  for (FamilyId id :
       {FamilyId::chacon_classic, FamilyId::hajian_kakutani, FamilyId::chacon_like,
        FamilyId::steep_hk, FamilyId::power_family})
    if (name == family_name(id)) return build_family(id, std::move(params), depth_hint);
  throw ConfigError("unknown family: " + name);
}

inline ConstructionSpec make_explicit(std::vector<StageSpec> stages) {
  ConstructionSpec spec;
  spec.family = FamilyId::explicit_stages;
  spec.depth_hint = stages.size();
  for (std::size_t n = 0; n < stages.size(); ++n) stages[n].validate(n);
  spec.stages = std::move(stages);
  return spec;
}

// Convenience: hajian_kakutani with sigma(n) = mul * h_n (+ add).
inline ConstructionSpec make_hk(BigInt mul = 2, BigInt add = 0, std::size_t depth_hint = 4096) {
  FamilyParams p;
  p.sigma = SpacerRule{std::move(mul), std::move(add), {}};
  return build_family(FamilyId::hajian_kakutani, std::move(p), depth_hint);
}

inline ConstructionSpec make_power(unsigned c, std::size_t depth_hint = 4096) {
  FamilyParams p;
  p.power_exponent = BigInt(c);
  return build_family(FamilyId::power_family, std::move(p), depth_hint);
}

inline ConstructionSpec make_chacon(std::size_t depth_hint = 4096) {
  return build_family(FamilyId::chacon_classic, {}, depth_hint);
}

inline ConstructionSpec make_steep_hk(unsigned q, std::size_t depth_hint = 4096) {
  FamilyParams p;
  p.ratio = BigInt(q);
  return build_family(FamilyId::steep_hk, std::move(p), depth_hint);
}

// Steep stage list with a prescribed cut schedule: partial subcolumn sums
// quadruple within each stage and the last spacer block keeps the next
// stage's first offset above four times the previous maximum (and the top
// half of every column fresh).
inline std::vector<StageSpec> make_steep_stages(std::size_t m,
                                                const std::function<int(std::size_t)>& cuts_of) {
  std::vector<StageSpec> out;
  BigInt h = 1;
  for (std::size_t n = 0; n < m; ++n) {
    const int r = cuts_of(n);
    if (r < 2) throw ConfigError("cut schedule must give r >= 2");
    StageSpec st;
    st.cuts = r;
    st.spacers.assign(1, 0);
    BigInt partial = h;  // running sum of h_{n,k}
    for (int i = 1; i < r - 1; ++i) {
      BigInt s = 3 * partial - h;
      st.spacers.push_back(s);
      partial += h + s;
    }
    st.spacers.push_back(3 * partial);
    st.validate(n);
    out.push_back(st);
    h = detail::stage_height_after(h, st);
  }
  return out;
}

// Almost-steep variant: s_{n,0} = 0 and s_{n,1} = 1, quadrupling afterwards.
inline std::vector<StageSpec> make_almost_steep_stages(
    std::size_t m, const std::function<int(std::size_t)>& cuts_of) {
  std::vector<StageSpec> out;
  BigInt h = 1;
  for (std::size_t n = 0; n < m; ++n) {
    const int r = cuts_of(n);
    if (r < 3) throw ConfigError("almost-steep stages need r >= 3");
    StageSpec st;
    st.cuts = r;
    st.spacers = {BigInt(0), BigInt(1)};
    BigInt partial = 2 * h + 1;
    for (int i = 2; i < r - 1; ++i) {
      BigInt s = 3 * partial - h;
      st.spacers.push_back(s);
      partial += h + s;
    }
    st.spacers.push_back(3 * partial);
    st.validate(n);
    out.push_back(st);
    h = detail::stage_height_after(h, st);
  }
  return out;
}

// Canonical text of an expanded prefix; all cache keys hash this, so an
// explicit stage list equal to a named family's expansion keys identically.
inline std::string canonical_stage_text(const std::vector<StageSpec>& stages) {
  std::string s;
  for (const StageSpec& st : stages) {
    s += std::to_string(st.cuts);
    s += ':';
    for (std::size_t i = 0; i < st.spacers.size(); ++i) {
      if (i) s += ',';
      s += st.spacers[i].str();
    }
    s += ';';
  }
  return s;
}

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string spec_hash(const std::vector<StageSpec>& stages) {
  std::ostringstream os;
  os << std::hex << fnv1a64(canonical_stage_text(stages));
  return os.str();
}

}  // namespace rankone
