#pragma once

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "rankone/errors.hpp"
#include "rankone/numbers.hpp"

namespace rankone {

// One verified comparison. lhs/rhs are exact rationals; pass reflects the
// stated relation exactly (trend checks flag themselves in `detail`).
struct Check {
  std::string name;
  Rational lhs;
  std::string relation;  // "==", "<=", ">=", "<", "in"
  Rational rhs;
  bool pass = false;
  std::string detail;
};

inline Check check_eq(std::string name, Rational lhs, Rational rhs, std::string detail = "") {
  bool ok = lhs == rhs;
  return Check{std::move(name), std::move(lhs), "==", std::move(rhs), ok, std::move(detail)};
}

inline Check check_le(std::string name, Rational lhs, Rational rhs, std::string detail = "") {
  bool ok = lhs <= rhs;
  return Check{std::move(name), std::move(lhs), "<=", std::move(rhs), ok, std::move(detail)};
}

inline Check check_ge(std::string name, Rational lhs, Rational rhs, std::string detail = "") {
  bool ok = lhs >= rhs;
  return Check{std::move(name), std::move(lhs), ">=", std::move(rhs), ok, std::move(detail)};
}

inline Check check_lt(std::string name, Rational lhs, Rational rhs, std::string detail = "") {
  bool ok = lhs < rhs;
  return Check{std::move(name), std::move(lhs), "<", std::move(rhs), ok, std::move(detail)};
}

inline Check check_true(std::string name, bool ok, std::string detail = "") {
  return Check{std::move(name), Rational(ok ? 1 : 0), "==", Rational(1), ok, std::move(detail)};
}

struct SuiteReport {
  std::string suite;
  std::string family;
  std::vector<Check> checks;
  double elapsed_ms = 0.0;

  bool all_pass() const {
    for (const Check& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(Check c) { checks.push_back(std::move(c)); }
};

inline nlohmann::json rational_json(const Rational& q) {
  return nlohmann::json{{"exact", fraction_string(q)}, {"decimal", decimal_string(q)}};
}

// `meta` carries the volatile fields (timestamp, runtime); everything else is
// byte-reproducible across runs.
inline nlohmann::json suite_json(const SuiteReport& rep, bool include_meta = true,
                                 const std::string& timestamp = "") {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", rational_json(c.lhs)},
                      {"relation", c.relation},
                      {"rhs", rational_json(c.rhs)},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  }
  nlohmann::json out{{"schema", "rankone-verdicts-v1"},
                     {"suite", rep.suite},
                     {"family", rep.family},
                     {"pass", rep.all_pass()},
                     {"checks", std::move(checks)}};
  if (include_meta) out["meta"] = {{"generated_at", timestamp}, {"elapsed_ms", rep.elapsed_ms}};
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open for writing: " + path);
  os << content;
  if (!os) throw Error("write failed: " + path);
}

}  // namespace rankone
