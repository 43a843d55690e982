#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace moduli {

// Exact arbitrary-precision rational, the only scalar type in the library.
// gmp keeps values canonical (gcd 1, positive denominator).
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p/q" or "p" (decimal-free).
inline Rational rat_parse(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  r.canonicalize();
  return r;
}

// Serializes as "p/q", or "p" when the denominator is 1.
inline std::string rat_str(const Rational& r) { return r.get_str(); }

inline Rational rat_pow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw std::domain_error("0 raised to a negative power");
    Rational inv = 1 / base;
    return rat_pow(inv, -e);
  }
  Rational acc = 1, b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

inline bool rat_is_integer(const Rational& r) { return r.get_den() == 1; }

// Field-element zero test used by the generic linear algebra.
inline bool fe_is_zero(const Rational& r) { return r == 0; }

}  // namespace moduli
