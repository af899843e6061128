// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_RATIONAL_HPP
#define LPNN_RATIONAL_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "lpnn/errors.hpp"

namespace lpnn {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, always canonical (gcd 1, positive
// denominator). Every finite code of every format maps to one of these
// exactly, which is what makes the accumulate-then-round contracts
// testable at all.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2_int(long e) {
  BigInt r = 1;
  return r << e;
}

/// 2^e as an exact rational, e may be negative.
inline Rational pow2(long e) {
  if (e >= 0) return Rational(pow2_int(e));
  return Rational(1, pow2_int(-e));
}

/// Index of the most significant set bit (0-based). Requires x > 0.
inline long msb_index(const BigInt& x) {
  return static_cast<long>(boost::multiprecision::msb(x));
}

/// floor(a / b) for b > 0 (division rounding toward minus infinity).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

/// floor(v) as a big integer.
inline BigInt floor_rational(const Rational& v) {
  return floor_div(boost::multiprecision::numerator(v),
                   boost::multiprecision::denominator(v));
}

/// Exponent e with 2^e <= v < 2^(e+1). Requires v > 0.
inline long floor_log2(const Rational& v) {
  const BigInt& num = boost::multiprecision::numerator(v);
  const BigInt& den = boost::multiprecision::denominator(v);
  long e = msb_index(num) - msb_index(den);
  // num/den in [2^e, 2^(e+2)); one comparison settles which half.
  if (e >= 0) {
    if (num >= (den << (e + 1))) ++e;
  } else {
    if ((num << (-e - 1)) >= den) ++e;
  }
  return e;
}

/// Exact dyadic rational value of a finite double.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error("rational_from_double: non-finite input");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  return Rational(mant) * pow2(exp - 53);
}

inline double to_double(const Rational& v) { return v.convert_to<double>(); }

/// Parses "-12", "3.25", "1e-3", "2.5e2" or "p/q" into an exact rational.
inline Rational parse_rational(std::string_view s) {
  const std::string text(s);
  if (text.empty()) throw SchemaError("empty numeric literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw SchemaError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  long frac_digits = 0;
  bool any = false, in_frac = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (in_frac) ++frac_digits;
      any = true;
    } else if (c == '.' && !in_frac) {
      in_frac = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      throw SchemaError("bad numeric literal '" + text + "'");
    }
  }
  long exp10 = 0;
  if (i < text.size()) {  // exponent part
    ++i;
    try {
      exp10 = std::stol(text.substr(i));
    } catch (const std::exception&) {
      throw SchemaError("bad exponent in '" + text + "'");
    }
  }
  if (!any) throw SchemaError("bad numeric literal '" + text + "'");
  Rational v(digits);
  long p = exp10 - frac_digits;
  BigInt ten = 10;
  if (p > 0) {
    v *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(p)));
  } else if (p < 0) {
    v /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-p)));
  }
  return negative ? -v : v;
}

/// Exact string form. Terminating decimal when the denominator is
/// 2^a * 5^b, otherwise "p/q". Either form round-trips through
/// parse_rational unchanged.
inline std::string to_exact_string(const Rational& v) {
  BigInt num = boost::multiprecision::numerator(v);
  BigInt den = boost::multiprecision::denominator(v);
  bool negative = num < 0;
  if (negative) num = -num;
  long twos = 0, fives = 0;
  BigInt d = den;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return v.str();  // falls back to "p/q"
  // scale to 10^k
  long k = twos > fives ? twos : fives;
  BigInt ten = 10;
  BigInt scaled = num * (boost::multiprecision::pow(ten, static_cast<unsigned>(k)) / den);
  std::string digits = scaled.str();
  std::string out = negative ? "-" : "";
  if (k == 0) return out + digits;
  if (static_cast<long>(digits.size()) <= k) {
    digits.insert(0, static_cast<std::size_t>(k) - digits.size() + 1, '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(k), ".");
  // trim trailing zeros but keep at least one fractional digit
  while (digits.back() == '0' && digits[digits.size() - 2] != '.') digits.pop_back();
  return out + digits;
}

}  // namespace lpnn

#endif  // LPNN_RATIONAL_HPP
