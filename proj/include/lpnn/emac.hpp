// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_EMAC_HPP
#define LPNN_EMAC_HPP

#include <bit>
#include <cstdint>
#include <span>
#include <string>

#include "lpnn/codec.hpp"
#include "lpnn/errors.hpp"
#include "lpnn/format.hpp"
#include "lpnn/rational.hpp"

namespace lpnn {

inline int ceil_log2_long(long k) {
  if (k <= 1) return 0;
  return std::bit_width(static_cast<unsigned long>(k - 1));
}

/// ceil(log2(v)) for a positive rational.
inline long ceil_log2(const Rational& v) {
  long e = floor_log2(v);
  return v == pow2(e) ? e : e + 1;
}

/// Accumulator width for k products of a fixed or float format:
/// ceil(log2 k) + 2*ceil(log2(max/min)) + 2.
inline int kulisch_width(const FormatSpec& spec, long k) {
  if (spec.kind == Kind::Posit)
    throw FormatMismatchError("kulisch_width: use quire_width for posits");
  if (k < 1) throw ConfigError("kulisch_width: k must be >= 1");
  Extrema e = format_extrema(spec);
  return ceil_log2_long(k) + 2 * static_cast<int>(ceil_log2(e.max / e.min)) + 2;
}

/// Posit accumulator width: 2^(es+2) * (n-2) + 2 + ceil(log2 k), n >= 3.
inline int quire_width(int n, int es, long k) {
  if (n < 3) throw ConfigError("quire_width: n must be >= 3");
  if (k < 1) throw ConfigError("quire_width: k must be >= 1");
  return (1 << (es + 2)) * (n - 2) + 2 + ceil_log2_long(k);
}

/// Scale-factor offset that makes every posit shift non-negative; also
/// the fraction-bit count of the posit quire (its lsb weighs min^2).
inline long posit_scale_bias(const FormatSpec& spec) {
  return static_cast<long>(1L << (spec.es + 1)) * (spec.n - 2);
}

/// Wide two's-complement accumulator. The value is held exactly and
/// every add checks the declared register width.
class Quire {
 public:
  Quire(int width, long scale) : width_(width), scale_(scale) {}

  /// Adds `contrib` (in lsb units of 2^-scale).
  void add(const BigInt& contrib) {
    value_ += contrib;
    check_range();
  }

  const BigInt& value() const { return value_; }
  int width() const { return width_; }
  long scale() const { return scale_; }

  Rational to_rational() const { return Rational(value_) * pow2(-scale_); }

 private:
  void check_range() const {
    // two's complement range [-2^(w-1), 2^(w-1) - 1]
    const BigInt hi = (BigInt(1) << (width_ - 1)) - 1;
    if (value_ > hi || value_ < -hi - 1)
      throw QuireOverflowError("quire wrapped at width " +
                               std::to_string(width_));
  }

  BigInt value_ = 0;
  int width_;
  long scale_;
};

/// Per-layer accumulation setup: format, fan-in k and the bias code the
/// accumulator is preloaded with.
struct MacConfig {
  FormatSpec spec;
  long k = 1;
  Code bias;

  MacConfig(FormatSpec s, long k_, Code bias_) : spec(s), k(k_), bias(bias_) {
    if (k < 1) throw ConfigError("MacConfig: k must be >= 1");
    if (bias.spec != spec)
      throw FormatMismatchError("MacConfig: bias code format differs");
  }
};

namespace detail {

inline void check_pair_lengths(std::span<const Code> w, std::span<const Code> a,
                               const MacConfig& cfg) {
  if (w.size() != a.size())
    throw LengthMismatchError("emac: " + std::to_string(w.size()) +
                              " weights vs " + std::to_string(a.size()) +
                              " activations");
  if (static_cast<long>(w.size()) > cfg.k)
    throw LengthMismatchError("emac: vector length exceeds configured k");
  for (const Code& c : w)
    if (c.spec != cfg.spec) throw FormatMismatchError("emac: weight format");
  for (const Code& c : a)
    if (c.spec != cfg.spec) throw FormatMismatchError("emac: activation format");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fixed-point EMAC: products kept at full 2n-bit width, summed exactly,
// then shifted right by q (floor) and clipped into n bits.
// ---------------------------------------------------------------------------

inline Code fixed_emac(std::span<const Code> weights,
                       std::span<const Code> activations,
                       const MacConfig& cfg) {
  if (cfg.spec.kind != Kind::Fixed)
    throw FormatMismatchError("fixed_emac: config is not fixed-point");
  detail::check_pair_lengths(weights, activations, cfg);
  const int q = cfg.spec.q;
  const int n = cfg.spec.n;

  Quire quire(kulisch_width(cfg.spec, cfg.k), 2 * q);
  quire.add(BigInt(fixed_signed(cfg.bias)) << q);  // bias preload
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const std::int64_t p = fixed_signed(weights[i]) * fixed_signed(activations[i]);
    quire.add(BigInt(p));
  }

  BigInt units = floor_div(quire.value(), BigInt(1) << q);
  const BigInt hi = (BigInt(1) << (n - 1)) - 1;
  const BigInt lo = -(BigInt(1) << (n - 1));
  if (units > hi) units = hi;
  if (units < lo) units = lo;
  auto s = units.convert_to<std::int64_t>();
  return Code{static_cast<std::uint32_t>(
                  s & static_cast<std::int64_t>(low_mask(n))),
              cfg.spec};
}

// ---------------------------------------------------------------------------
// Float EMAC: significand products shifted into a Kulisch register whose
// lsb weighs min^2 (subnormal hidden bits handled by the decoder), one
// nearest-even rounding after the sum.
// ---------------------------------------------------------------------------

inline Code float_emac(std::span<const Code> weights,
                       std::span<const Code> activations,
                       const MacConfig& cfg) {
  if (cfg.spec.kind != Kind::Float)
    throw FormatMismatchError("float_emac: config is not float");
  detail::check_pair_lengths(weights, activations, cfg);
  const int wf = cfg.spec.wf;
  const int bias = (1 << (cfg.spec.we - 1)) - 1;
  const long scale = 2L * (bias - 1 + wf);  // lsb = min^2

  Quire quire(kulisch_width(cfg.spec, cfg.k), scale);

  DecodedFloat b = float_decode(cfg.bias);
  if (b.cls != DecodedFloat::Class::Zero) {
    BigInt contrib = BigInt(b.significand)
                     << (b.effective_exponent(cfg.spec.we) - wf + scale);
    quire.add(b.negative ? -contrib : contrib);
  }

  for (std::size_t i = 0; i < weights.size(); ++i) {
    DecodedFloat dw = float_decode(weights[i]);
    DecodedFloat da = float_decode(activations[i]);
    if (dw.cls == DecodedFloat::Class::Zero || da.cls == DecodedFloat::Class::Zero)
      continue;
    const std::uint64_t sig_prod =
        static_cast<std::uint64_t>(dw.significand) * da.significand;
    const long exp_prod = static_cast<long>(dw.effective_exponent(cfg.spec.we)) +
                          da.effective_exponent(cfg.spec.we) - 2 * wf;
    BigInt contrib = BigInt(sig_prod) << (exp_prod + scale);
    quire.add((dw.negative != da.negative) ? -contrib : contrib);
  }

  const BigInt& sum = quire.value();
  if (sum == 0) return zero_code(cfg.spec);
  const bool negative = sum < 0;
  return round_float_scaled(cfg.spec, negative, negative ? BigInt(-sum) : sum,
                            -scale, false);
}

// ---------------------------------------------------------------------------
// Posit EMAC. Stages: decode, fraction multiply with overflow
// renormalization, scale-factor bias, quire accumulation, leading-zero
// extraction, convergent rounding & encoding.
// ---------------------------------------------------------------------------

inline Code posit_emac(std::span<const Code> weights,
                       std::span<const Code> activations,
                       const MacConfig& cfg) {
  if (cfg.spec.kind != Kind::Posit)
    throw FormatMismatchError("posit_emac: config is not posit");
  detail::check_pair_lengths(weights, activations, cfg);
  const int es = cfg.spec.es;
  const int fs = posit_sig_bits(cfg.spec);
  const long bias = posit_scale_bias(cfg.spec);

  Quire quire(quire_width(cfg.spec.n, es, cfg.k), bias);

  DecodedPosit b = posit_decode(cfg.bias);
  if (b.cls == DecodedPosit::Class::NaR)
    throw NaRError("posit_emac: NaR bias");
  if (b.cls == DecodedPosit::Class::Normal) {
    BigInt contrib = BigInt(b.significand)
                     << (b.scale_factor(es) - (fs - 1) + bias);
    quire.add(b.negative ? -contrib : contrib);
  }

  for (std::size_t i = 0; i < weights.size(); ++i) {
    DecodedPosit dw = posit_decode(weights[i]);
    DecodedPosit da = posit_decode(activations[i]);
    if (dw.cls == DecodedPosit::Class::NaR || da.cls == DecodedPosit::Class::NaR)
      throw NaRError("posit_emac: NaR input at index " + std::to_string(i));
    if (dw.cls == DecodedPosit::Class::Zero || da.cls == DecodedPosit::Class::Zero)
      continue;

    const bool sign_mult = dw.negative != da.negative;
    const std::uint64_t frac_mult =
        static_cast<std::uint64_t>(dw.significand) * da.significand;
    const int ovf_mult = static_cast<int>(frac_mult >> (2 * fs - 1)) & 1;
    // Renormalized product: frac_mult * 2^-(2fs-2+ovf) in [1,2),
    // scale factor picks up the overflow bit.
    const long sf_mult = dw.scale_factor(es) + da.scale_factor(es) + ovf_mult;
    const long shift = (sf_mult + bias) - (2 * fs - 2) - ovf_mult;

    BigInt contrib;
    if (shift >= 0) {
      contrib = BigInt(frac_mult) << shift;
    } else {
      // Long regimes leave no fraction bits, so the dropped bits are
      // always zero; the register lsb (min^2) still holds the product.
      contrib = BigInt(frac_mult >> (-shift));
      if ((frac_mult & ((std::uint64_t{1} << (-shift)) - 1)) != 0)
        throw Error("posit_emac: product below quire lsb");
    }
    quire.add(sign_mult ? -contrib : contrib);
  }

  const BigInt& sum = quire.value();
  if (sum == 0) return zero_code(cfg.spec);
  const bool sign_quire = sum < 0;
  return round_posit_scaled(cfg.spec, sign_quire,
                            sign_quire ? BigInt(-sum) : sum, -bias, false);
}

/// Dispatch on the configured format kind.
inline Code emac(std::span<const Code> weights, std::span<const Code> activations,
                 const MacConfig& cfg) {
  switch (cfg.spec.kind) {
    case Kind::Posit: return posit_emac(weights, activations, cfg);
    case Kind::Float: return float_emac(weights, activations, cfg);
    case Kind::Fixed: return fixed_emac(weights, activations, cfg);
  }
  throw Error("emac: bad kind");
}

}  // namespace lpnn

#endif  // LPNN_EMAC_HPP
