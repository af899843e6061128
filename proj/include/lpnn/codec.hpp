// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_CODEC_HPP
#define LPNN_CODEC_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "lpnn/errors.hpp"
#include "lpnn/format.hpp"
#include "lpnn/rational.hpp"

namespace lpnn {

// ---------------------------------------------------------------------------
// Decoded views
// ---------------------------------------------------------------------------

/// Fully unpacked posit. For Normal codes the value is
///   (-1)^sign * (2^(2^es))^regime * 2^exponent * significand / 2^(fs-1)
/// where fs = n - 2 - es and the significand always carries the hidden bit
/// at position fs-1 (fraction bits shifted out by a long regime read as 0).
struct DecodedPosit {
  enum class Class { Zero, NaR, Normal };
  Class cls = Class::Zero;
  bool negative = false;
  int regime = 0;                  // k
  int exponent = 0;                // e, in [0, 2^es)
  std::uint32_t significand = 0;   // fs bits incl. hidden bit

  /// Combined binary scale factor k * 2^es + e.
  int scale_factor(int es) const { return (regime << es) + exponent; }
};

/// Unpacked float. Subnormals carry hidden bit 0 and effective exponent
/// 1 - bias; the all-ones exponent field is rejected on decode.
struct DecodedFloat {
  enum class Class { Zero, Subnormal, Normal };
  Class cls = Class::Zero;
  bool negative = false;
  int exp_field = 0;
  std::uint32_t significand = 0;  // wf+1 bits for normals, hidden bit 0 else

  int bias(int we) const { return (1 << (we - 1)) - 1; }
  /// Unbiased power of two applied to significand/2^wf.
  int effective_exponent(int we) const {
    return (exp_field == 0 ? 1 : exp_field) - bias(we);
  }
};

/// Significand width (hidden bit included) of a posit spec.
inline int posit_sig_bits(const FormatSpec& spec) {
  return spec.n - 2 - spec.es;
}

// ---------------------------------------------------------------------------
// Posit decode / encode
// ---------------------------------------------------------------------------

/// Leading zero count within an isolated field of `width` bits.
inline int clz_field(std::uint32_t x, int width) {
  if (x == 0) return width;
  return std::countl_zero(x) - (32 - width);
}

inline DecodedPosit posit_decode(const Code& c) {
  if (c.spec.kind != Kind::Posit)
    throw FormatMismatchError("posit_decode: not a posit code");
  const int n = c.spec.n;
  const int es = c.spec.es;
  const std::uint32_t bits = c.bits & low_mask(n);

  DecodedPosit d;
  if (bits == 0) {
    d.cls = DecodedPosit::Class::Zero;
    return d;
  }
  if (bits == (1u << (n - 1))) {
    d.cls = DecodedPosit::Class::NaR;
    return d;
  }

  d.cls = DecodedPosit::Class::Normal;
  d.negative = (bits >> (n - 1)) & 1u;
  // magnitude pattern: two's complement of the low n-1 bits when negative
  std::uint32_t body =
      d.negative ? ((~bits + 1u) & low_mask(n - 1)) : (bits & low_mask(n - 1));

  const std::uint32_t rc = (body >> (n - 2)) & 1u;  // regime check
  const std::uint32_t inv = rc ? (~body & low_mask(n - 1)) : body;
  const int zc = clz_field(inv, n - 1);
  d.regime = rc ? zc - 1 : -zc;

  // Bits below the regime terminator hold exponent then fraction,
  // left-aligned into an n-3 bit field (vacated positions read as 0).
  const int used = zc + 1 > n - 1 ? n - 1 : zc + 1;
  const int rem = (n - 1) - used;
  const int fieldw = n - 3;
  std::uint32_t aligned =
      rem > 0 ? ((body & low_mask(rem)) << (fieldw - rem)) : 0u;
  const int fs = posit_sig_bits(c.spec);
  d.exponent = es > 0 ? static_cast<int>(aligned >> (fieldw - es)) : 0;
  d.significand = (1u << (fs - 1)) | (aligned & low_mask(fs - 1));
  return d;
}

inline Code posit_encode(const DecodedPosit& d, const FormatSpec& spec) {
  if (spec.kind != Kind::Posit)
    throw FormatMismatchError("posit_encode: not a posit spec");
  const int n = spec.n;
  const int es = spec.es;
  if (d.cls == DecodedPosit::Class::Zero) return Code{0, spec};
  if (d.cls == DecodedPosit::Class::NaR)
    return Code{1u << (n - 1), spec};

  const int fs = posit_sig_bits(spec);
  const int k = d.regime;
  if (k < -(n - 2) || k > n - 2)
    throw NotRepresentableError("posit_encode: regime " + std::to_string(k) +
                                " out of range for n=" + std::to_string(n));
  if (es > 0 && (d.exponent < 0 || d.exponent >= (1 << es)))
    throw NotRepresentableError("posit_encode: exponent field overflow");
  if ((d.significand >> (fs - 1)) != 1u)
    throw NotRepresentableError("posit_encode: hidden bit not set");

  std::uint32_t regime_pattern;
  int rw;  // regime width incl. terminator (or n-1 for the extremes)
  if (k >= 0) {
    rw = k + 2;
    if (rw > n - 1) rw = n - 1;                       // k = n-2: all ones
    regime_pattern = low_mask(k + 1) << (rw - k - 1);  // ones then 0
  } else {
    rw = 1 - k;
    regime_pattern = 1u;  // zeros then 1
  }
  const int avail = (n - 1) - rw;

  // exponent then fraction, packed into fieldw = es + fs - 1 bits
  const int fieldw = es + fs - 1;
  const std::uint32_t fieldval =
      (static_cast<std::uint32_t>(d.exponent) << (fs - 1)) |
      (d.significand & low_mask(fs - 1));
  const int dropped = fieldw - avail;
  std::uint32_t tail;
  if (dropped > 0) {
    if ((fieldval & low_mask(dropped)) != 0)
      throw NotRepresentableError(
          "posit_encode: fraction/exponent bits do not fit regime " +
          std::to_string(k));
    tail = fieldval >> dropped;
  } else {
    tail = fieldval;  // dropped <= 0 can only happen with avail == fieldw
  }

  std::uint32_t body = (regime_pattern << avail) | tail;
  std::uint32_t bits = d.negative ? ((~body + 1u) & low_mask(n)) : body;
  return Code{bits, spec};
}

// ---------------------------------------------------------------------------
// Float decode
// ---------------------------------------------------------------------------

inline DecodedFloat float_decode(const Code& c) {
  if (c.spec.kind != Kind::Float)
    throw FormatMismatchError("float_decode: not a float code");
  const int we = c.spec.we;
  const int wf = c.spec.wf;
  const std::uint32_t bits = c.bits & low_mask(c.spec.n);

  DecodedFloat d;
  d.negative = (bits >> (we + wf)) & 1u;
  d.exp_field = static_cast<int>((bits >> wf) & low_mask(we));
  const std::uint32_t frac = bits & low_mask(wf);
  if (d.exp_field == (1 << we) - 1)
    throw ReservedInputError("float code with all-ones exponent field");
  if (d.exp_field == 0) {
    d.significand = frac;
    d.cls = frac == 0 ? DecodedFloat::Class::Zero : DecodedFloat::Class::Subnormal;
  } else {
    d.significand = (1u << wf) | frac;
    d.cls = DecodedFloat::Class::Normal;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Exact values
// ---------------------------------------------------------------------------

/// Fixed codes as signed two's-complement integers.
inline std::int64_t fixed_signed(const Code& c) {
  const int n = c.spec.n;
  std::uint32_t bits = c.bits & low_mask(n);
  if (bits >> (n - 1)) {
    return static_cast<std::int64_t>(bits) - (std::int64_t{1} << n);
  }
  return static_cast<std::int64_t>(bits);
}

/// Exact rational value of a code; nullopt marks posit NaR.
/// Float codes with a reserved exponent field are rejected.
inline std::optional<Rational> code_to_exact(const Code& c) {
  switch (c.spec.kind) {
    case Kind::Posit: {
      DecodedPosit d = posit_decode(c);
      if (d.cls == DecodedPosit::Class::NaR) return std::nullopt;
      if (d.cls == DecodedPosit::Class::Zero) return Rational(0);
      const int fs = posit_sig_bits(c.spec);
      Rational v = Rational(d.significand) *
                   pow2(d.scale_factor(c.spec.es) - (fs - 1));
      return d.negative ? -v : v;
    }
    case Kind::Float: {
      DecodedFloat d = float_decode(c);
      if (d.cls == DecodedFloat::Class::Zero) return Rational(0);
      Rational v = Rational(d.significand) *
                   pow2(d.effective_exponent(c.spec.we) - c.spec.wf);
      return d.negative ? -v : v;
    }
    case Kind::Fixed:
      return Rational(fixed_signed(c)) * pow2(-c.spec.q);
  }
  throw Error("code_to_exact: bad kind");
}

// ---------------------------------------------------------------------------
// Extrema / dynamic range
// ---------------------------------------------------------------------------

struct Extrema {
  Rational max;  // largest positive magnitude
  Rational min;  // smallest positive magnitude (float: min subnormal)
};

inline Extrema format_extrema(const FormatSpec& spec) {
  switch (spec.kind) {
    case Kind::Posit: {
      // useed = 2^(2^es); max = useed^(n-2), min = useed^(-(n-2))
      const long p = static_cast<long>(1L << spec.es) * (spec.n - 2);
      return {pow2(p), pow2(-p)};
    }
    case Kind::Float: {
      const int bias = (1 << (spec.we - 1)) - 1;
      const int exp_max = (1 << spec.we) - 2;
      Rational max = pow2(exp_max - bias) * (Rational(2) - pow2(-spec.wf));
      Rational min = pow2(1 - bias) * pow2(-spec.wf);
      return {max, min};
    }
    case Kind::Fixed: {
      Rational max = Rational((std::int64_t{1} << (spec.n - 1)) - 1) * pow2(-spec.q);
      return {max, pow2(-spec.q)};
    }
  }
  throw Error("format_extrema: bad kind");
}

/// log10(max/min) in double precision.
inline double dynamic_range(const FormatSpec& spec) {
  Extrema e = format_extrema(spec);
  return std::log10(to_double(e.max / e.min));
}

// ---------------------------------------------------------------------------
// Rounding cores
//
// Both cores take a positive magnitude as (mag, lsb_exp): value =
// mag * 2^lsb_exp, plus a sticky flag for discarded nonzero tail. They
// build the output pattern bitwise and apply round-to-nearest-even by
// incrementing the packed code, so fraction carries ripple into the
// exponent/regime fields naturally.
// ---------------------------------------------------------------------------

namespace detail {

inline BigInt bigint_low_mask(long bits) {
  return bits <= 0 ? BigInt(0) : (BigInt(1) << bits) - 1;
}

}  // namespace detail

namespace detail {

/// Exact value of a positive posit magnitude pattern (sign bit 0) as
/// (significand, exponent-of-lsb); decode direction only.
inline std::pair<BigInt, long> posit_body_value(std::uint32_t body,
                                                const FormatSpec& spec);

}  // namespace detail

/// Nearest posit rounding of (-1)^neg * mag * 2^lsb_exp, ties to the
/// even code. Nearest is decided in value space against the exact
/// midpoint of the bracketing codes -- where a long regime truncates
/// exponent bits, adjacent codes sit several binades apart and bit-level
/// guard/sticky would round across the wrong boundary. Saturates at
/// +-max; a nonzero value never rounds to zero.
inline Code round_posit_scaled(const FormatSpec& spec, bool negative,
                               const BigInt& mag, long lsb_exp, bool sticky_in) {
  const int n = spec.n;
  const int es = spec.es;
  if (mag == 0) return Code{0, spec};

  const long L = msb_index(mag);
  const long sf = L + lsb_exp;  // floor(log2 value)
  const long sf_max = static_cast<long>(1L << es) * (n - 2);

  auto finish = [&](std::uint32_t body) {
    std::uint32_t bits = negative ? ((~body + 1u) & low_mask(n)) : body;
    return Code{bits, spec};
  };
  if (sf >= sf_max) return finish(low_mask(n - 1));  // clamp at max
  if (sf < -sf_max) return finish(1u);               // clamp at min

  long k = sf >> es;                      // floor division by 2^es
  const long e = sf - (k << es);          // in [0, 2^es)
  const int rw = k >= 0 ? static_cast<int>(k) + 2 : static_cast<int>(1 - k);
  std::uint32_t regime_pattern =
      k >= 0 ? ((low_mask(static_cast<int>(k) + 1) << 1)) : 1u;

  // B = regime ++ exponent ++ fraction bits of mag below its MSB; its
  // top n-1 bits are the largest code magnitude <= the value.
  BigInt b = ((BigInt(regime_pattern) << es) | e);
  b = (b << L) | (mag - (BigInt(1) << L));
  const long blen = rw + es + L;

  std::uint32_t body;
  bool below_exact;
  if (blen >= n) {
    const long shift = blen - (n - 1);
    body = static_cast<std::uint32_t>(b >> shift);
    below_exact = !sticky_in && (b & detail::bigint_low_mask(shift)) == 0;
  } else {
    body = static_cast<std::uint32_t>(b << ((n - 1) - blen));
    below_exact = !sticky_in;
  }
  if (below_exact) return finish(body);

  // compare 2*value against val(body) + val(body+1), all dyadic
  auto [lo_sig, lo_exp] = detail::posit_body_value(body, spec);
  auto [hi_sig, hi_exp] = detail::posit_body_value(body + 1, spec);
  // align everything to one lsb exponent
  long base = std::min({lsb_exp + 1, lo_exp, hi_exp});
  BigInt lhs = mag << (lsb_exp + 1 - base);
  BigInt rhs = (lo_sig << (lo_exp - base)) + (hi_sig << (hi_exp - base));
  if (lhs < rhs) return finish(body);
  if (lhs > rhs) return finish(body + 1);
  if (sticky_in) return finish(body + 1);  // truly above the midpoint
  return finish((body & 1u) == 0 ? body : body + 1);
}

namespace detail {

inline std::pair<BigInt, long> posit_body_value(std::uint32_t body,
                                                const FormatSpec& spec) {
  const int n = spec.n;
  const int es = spec.es;
  const std::uint32_t rc = (body >> (n - 2)) & 1u;
  const std::uint32_t inv = rc ? (~body & low_mask(n - 1)) : body;
  const int zc = clz_field(inv, n - 1);
  const int k = rc ? zc - 1 : -zc;
  const int used = zc + 1 > n - 1 ? n - 1 : zc + 1;
  const int rem = (n - 1) - used;
  const int fieldw = n - 3;
  const std::uint32_t aligned =
      rem > 0 ? ((body & low_mask(rem)) << (fieldw - rem)) : 0u;
  const int e = es > 0 ? static_cast<int>(aligned >> (fieldw - es)) : 0;
  const int fs = n - 2 - es;
  const std::uint32_t sig = (1u << (fs - 1)) | (aligned & low_mask(fs - 1));
  const long exp = static_cast<long>((static_cast<long>(k) << es) + e) - (fs - 1);
  return {BigInt(sig), exp};
}

}  // namespace detail

/// Nearest-even float rounding of (-1)^neg * mag * 2^lsb_exp.
/// Clips magnitudes beyond max at +-max; subnormal outputs get a zero
/// exponent field; values that round to zero magnitude return +0.
inline Code round_float_scaled(const FormatSpec& spec, bool negative,
                               const BigInt& mag, long lsb_exp, bool sticky_in) {
  const int we = spec.we;
  const int wf = spec.wf;
  if (mag == 0) return Code{0, spec};
  const int bias = (1 << (we - 1)) - 1;
  const int exp_max = (1 << we) - 2;

  auto finish = [&](std::uint32_t body) {
    if (body == 0) return Code{0, spec};
    std::uint32_t bits = body | (negative ? (1u << (spec.n - 1)) : 0u);
    return Code{bits, spec};
  };
  const std::uint32_t max_body =
      (static_cast<std::uint32_t>(exp_max) << wf) | low_mask(wf);

  const long L = msb_index(mag);
  long sf = L + lsb_exp;
  if (sf > exp_max - bias) return finish(max_body);

  std::uint32_t body;
  bool guard = false, sticky = sticky_in;
  if (sf >= 1 - bias) {
    // normal: keep hidden bit + wf fraction bits at exponent sf
    const long drop = L - wf;
    BigInt kept;
    if (drop > 0) {
      kept = mag >> drop;
      guard = boost::multiprecision::bit_test(mag, static_cast<unsigned>(drop - 1));
      if (!sticky && drop > 1) sticky = (mag & detail::bigint_low_mask(drop - 1)) != 0;
    } else {
      kept = mag << (-drop);
    }
    auto sig = static_cast<std::uint32_t>(kept);
    if (guard && (sticky || (sig & 1u))) ++sig;
    if (sig == (2u << wf)) {  // carry into the next binade
      sig >>= 1;
      ++sf;
      if (sf > exp_max - bias) return finish(max_body);
    }
    body = (static_cast<std::uint32_t>(sf + bias) << wf) | (sig & low_mask(wf));
  } else {
    // subnormal: fraction unit is 2^(1-bias-wf) regardless of sf
    const long drop = (1 - bias - wf) - lsb_exp;
    BigInt kept;
    if (drop > 0) {
      kept = mag >> drop;
      guard = boost::multiprecision::bit_test(mag, static_cast<unsigned>(drop - 1));
      if (!sticky && drop > 1) sticky = (mag & detail::bigint_low_mask(drop - 1)) != 0;
    } else {
      kept = mag << (-drop);
    }
    auto sig = static_cast<std::uint32_t>(kept);
    if (guard && (sticky || (sig & 1u))) ++sig;
    body = sig;  // sig == 2^wf rolls into the min normal naturally
  }
  return finish(body);
}

// ---------------------------------------------------------------------------
// round_to_format
// ---------------------------------------------------------------------------

namespace detail {

/// Decomposes |v| into (mag, lsb_exp, sticky) with exactly `sig_bits`
/// significand bits, mag in [2^(sig_bits-1), 2^sig_bits).
struct ScaledMagnitude {
  BigInt mag;
  long lsb_exp;
  bool sticky;
};

inline ScaledMagnitude scale_magnitude(const Rational& abs_v, int sig_bits) {
  const BigInt& num = boost::multiprecision::numerator(abs_v);
  const BigInt& den = boost::multiprecision::denominator(abs_v);
  const long sf = floor_log2(abs_v);
  const long shift = (sig_bits - 1) - sf;
  BigInt scaled_num = shift >= 0 ? (num << shift) : num;
  BigInt scaled_den = shift >= 0 ? den : (den << (-shift));
  BigInt mag = scaled_num / scaled_den;
  bool sticky = scaled_num % scaled_den != 0;
  return {mag, sf - (sig_bits - 1), sticky};
}

}  // namespace detail

/// Rounds an exact value into a format. Posit and float use round to
/// nearest, ties to even; fixed floors to q fraction bits. Magnitudes
/// beyond the format maximum clip to +-max, and nonzero posit values
/// never round to zero.
inline Code round_to_format(const Rational& v, const FormatSpec& spec) {
  if (spec.kind == Kind::Fixed) {
    const BigInt& num = boost::multiprecision::numerator(v);
    const BigInt& den = boost::multiprecision::denominator(v);
    BigInt units = floor_div(num << spec.q, den);
    const BigInt hi = (BigInt(1) << (spec.n - 1)) - 1;
    const BigInt lo = -(BigInt(1) << (spec.n - 1));
    if (units > hi) units = hi;
    if (units < lo) units = lo;
    auto s = units.convert_to<std::int64_t>();
    std::uint32_t bits =
        static_cast<std::uint32_t>(s & static_cast<std::int64_t>(low_mask(spec.n)));
    return Code{bits, spec};
  }
  if (v == 0) return zero_code(spec);
  const bool negative = v < 0;
  const Rational a = negative ? -v : v;
  auto sm = detail::scale_magnitude(a, spec.n + 2);
  if (spec.kind == Kind::Posit)
    return round_posit_scaled(spec, negative, sm.mag, sm.lsb_exp, sm.sticky);
  return round_float_scaled(spec, negative, sm.mag, sm.lsb_exp, sm.sticky);
}

/// True when the code's value is strictly negative (posit NaR is not).
inline bool code_is_negative(const Code& c) {
  switch (c.spec.kind) {
    case Kind::Posit:
      return !is_nar(c) && ((c.bits >> (c.spec.n - 1)) & 1u);
    case Kind::Float: {
      const bool sign = (c.bits >> (c.spec.n - 1)) & 1u;
      return sign && (c.bits & low_mask(c.spec.n - 1)) != 0;
    }
    case Kind::Fixed:
      return (c.bits >> (c.spec.n - 1)) & 1u;
  }
  return false;
}

}  // namespace lpnn

#endif  // LPNN_CODEC_HPP
