#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace clustergeo {

using Rational = mpq_class;

// Accepts "p" or "p/q" with q >= 2 and gcd(|p|, q) = 1; exactly one textual
// form per value, so serialized instances compare byte for byte.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline Rational abs_diff(const Rational& a, const Rational& b) {
  return a < b ? Rational(b - a) : Rational(a - b);
}

inline const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational clamp(const Rational& x, const Rational& lo, const Rational& hi) {
  if (x < lo) return lo;
  if (hi < x) return hi;
  return x;
}

}  // namespace clustergeo
