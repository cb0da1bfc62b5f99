#pragma once

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace rankone {

// Exact arithmetic only. Widths are rationals with denominator prod(r_n);
// heights, offsets and histogram counts are arbitrary-precision integers.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct BigIntHash {
  std::size_t operator()(const BigInt& v) const { return boost::hash<BigInt>()(v); }
};

inline std::string fraction_string(const Rational& q) {
  std::string s = boost::multiprecision::numerator(q).str();
  s += '/';
  s += boost::multiprecision::denominator(q).str();
  return s;
}

// Decimal rendering is a convenience column only; comparisons are never
// performed on it.
inline std::string decimal_string(const Rational& q, unsigned digits = 12) {
  using Dec = boost::multiprecision::cpp_dec_float_100;
  const Dec num(boost::multiprecision::numerator(q));
  const Dec den(boost::multiprecision::denominator(q));
  Dec val = num / den;
  std::string s = val.str(digits, std::ios_base::scientific);
  return s;
}

inline BigInt big_abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

inline BigInt big_pow(BigInt base, unsigned exp) {
  BigInt out = 1;
  while (exp) {
    if (exp & 1u) out *= base;
    base *= base;
    exp >>= 1u;
  }
  return out;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (unsigned i = 0; i < k; ++i) {
    out *= n - i;
    out /= i + 1;
  }
  return out;
}

inline BigInt factorial(unsigned n) {
  BigInt out = 1;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace rankone
