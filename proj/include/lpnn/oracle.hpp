// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_ORACLE_HPP
#define LPNN_ORACLE_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "lpnn/codec.hpp"
#include "lpnn/errors.hpp"
#include "lpnn/format.hpp"
#include "lpnn/rational.hpp"

// Independent reference for the EMAC and rounding paths. Shares no
// rounding code with codec.hpp: neighbors come from value search over
// the code space (exhaustive table for n <= 10, ordered bracketing
// above that), never from constructing bit patterns.

namespace lpnn {

struct OracleResult {
  Rational exact;
  Code rounded;
  Code neighbor_below;  // largest code value <= exact (clamped at -max)
  Code neighbor_above;  // smallest code value >= exact (clamped at +max)
  bool saturated = false;
};

/// Exact dot product plus bias, the definition of what an EMAC owes.
inline Rational oracle_dot(std::span<const Code> weights,
                           std::span<const Code> activations,
                           const Code& bias) {
  if (weights.size() != activations.size())
    throw LengthMismatchError("oracle_dot: length mismatch");
  auto value = [](const Code& c) {
    auto v = code_to_exact(c);
    if (!v) throw NaRError("oracle_dot: NaR input");
    return *v;
  };
  Rational sum = value(bias);
  for (std::size_t i = 0; i < weights.size(); ++i)
    sum += value(weights[i]) * value(activations[i]);
  return sum;
}

namespace oracle_detail {

using ValueTable = std::vector<std::pair<Rational, Code>>;

/// All finite codes of a spec sorted by value. Skips posit NaR, float
/// reserved exponents and the redundant float -0.
inline std::shared_ptr<const ValueTable> value_table(const FormatSpec& spec) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const ValueTable>> cache;
  const std::string key = format_tag(spec);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<ValueTable>();
  const std::uint32_t count = 1u << spec.n;
  for (std::uint32_t b = 0; b < count; ++b) {
    Code c{b, spec};
    if (spec.kind == Kind::Posit && is_nar(c)) continue;
    if (spec.kind == Kind::Float) {
      const int exp_field = static_cast<int>((b >> spec.wf) & low_mask(spec.we));
      if (exp_field == (1 << spec.we) - 1) continue;          // NaN / Inf
      if (b == (1u << (spec.n - 1))) continue;                // -0
    }
    table->emplace_back(*code_to_exact(c), c);
  }
  std::sort(table->begin(), table->end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, table);
  return table;
}

/// Value-ordered view of a code space without materializing it:
/// index -> code, monotone by value. Used for n > 10.
struct OrderedCodes {
  FormatSpec spec;
  std::int64_t size = 0;

  explicit OrderedCodes(const FormatSpec& s) : spec(s) {
    if (spec.kind == Kind::Posit) {
      size = (std::int64_t{1} << spec.n) - 1;  // all but NaR
    } else {
      const std::int64_t mags =
          (std::int64_t{1} << spec.wf) * ((1 << spec.we) - 1);  // incl +0
      size = 2 * mags - 1;  // negatives, zero, positives (-0 dropped)
    }
  }

  Code at(std::int64_t i) const {
    if (spec.kind == Kind::Posit) {
      // signed two's-complement order: -(2^(n-1)-1) ... 2^(n-1)-1
      const std::int64_t s = i - ((std::int64_t{1} << (spec.n - 1)) - 1);
      return Code{static_cast<std::uint32_t>(s) & low_mask(spec.n), spec};
    }
    const std::int64_t mags = (size + 1) / 2;
    if (i < mags - 1) {
      const auto m = static_cast<std::uint32_t>(mags - 1 - i);
      return Code{m | (1u << (spec.n - 1)), spec};
    }
    return Code{static_cast<std::uint32_t>(i - (mags - 1)), spec};
  }

  Rational value(std::int64_t i) const { return *code_to_exact(at(i)); }
};

}  // namespace oracle_detail

/// Nearest-even rounding by direct neighbor search, with the same
/// saturation rules the formats prescribe: clip at +-max, posit
/// nonzero never rounds to zero, ties pick the even code.
inline OracleResult oracle_round(const Rational& v, const FormatSpec& spec) {
  if (spec.kind == Kind::Fixed) {
    // floor to q fraction bits, clip at the two's-complement range
    Rational scaled = v * pow2(spec.q);
    BigInt units = floor_rational(scaled);
    const BigInt hi = (BigInt(1) << (spec.n - 1)) - 1;
    const BigInt lo = -(BigInt(1) << (spec.n - 1));
    OracleResult r;
    r.exact = v;
    r.saturated = units > hi || units < lo;
    if (units > hi) units = hi;
    if (units < lo) units = lo;
    auto s = units.convert_to<std::int64_t>();
    Code c{static_cast<std::uint32_t>(s & static_cast<std::int64_t>(
                                              low_mask(spec.n))),
           spec};
    r.rounded = c;
    r.neighbor_below = c;
    BigInt above = units + (r.saturated ? 0 : (Rational(units) == scaled ? 0 : 1));
    if (above > hi) above = hi;
    auto sa = above.convert_to<std::int64_t>();
    r.neighbor_above = Code{static_cast<std::uint32_t>(
                                sa & static_cast<std::int64_t>(low_mask(spec.n))),
                            spec};
    return r;
  }

  OracleResult r;
  r.exact = v;

  // locate bracketing codes by value order
  Code below, above;
  if (spec.n <= 10) {
    auto table = oracle_detail::value_table(spec);
    auto it = std::lower_bound(
        table->begin(), table->end(), v,
        [](const auto& entry, const Rational& x) { return entry.first < x; });
    if (it == table->end()) {
      below = above = table->back().second;
      r.saturated = true;
    } else if (it->first == v) {
      below = above = it->second;
    } else if (it == table->begin()) {
      below = above = table->front().second;
      r.saturated = true;
    } else {
      above = it->second;
      below = std::prev(it)->second;
    }
  } else {
    oracle_detail::OrderedCodes codes(spec);
    if (v > codes.value(codes.size - 1)) {
      below = above = codes.at(codes.size - 1);
      r.saturated = true;
    } else if (v < codes.value(0)) {
      below = above = codes.at(0);
      r.saturated = true;
    } else {
      std::int64_t lo = 0, hi = codes.size - 1;
      while (hi - lo > 1) {  // invariant: value(lo) <= v <= value(hi)
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (codes.value(mid) <= v)
          lo = mid;
        else
          hi = mid;
      }
      below = codes.at(lo);
      above = codes.value(lo) == v ? below : codes.at(hi);
      if (codes.value(hi) == v) below = above = codes.at(hi);
    }
  }
  r.neighbor_below = below;
  r.neighbor_above = above;

  if (r.saturated || below == above) {
    r.rounded = below;
    return r;
  }

  // posit: a nonzero value between zero and +-min resolves to +-min
  if (spec.kind == Kind::Posit && v != 0) {
    if (below.bits == 0 && v > 0) {
      r.rounded = above;
      return r;
    }
    if (above.bits == 0 && v < 0) {
      r.rounded = below;
      return r;
    }
  }

  const Rational d_below = v - *code_to_exact(below);
  const Rational d_above = *code_to_exact(above) - v;
  if (d_below < d_above) {
    r.rounded = below;
  } else if (d_above < d_below) {
    r.rounded = above;
  } else {
    r.rounded = (below.bits & 1u) == 0 ? below : above;  // tie to even
  }
  return r;
}

}  // namespace lpnn

#endif  // LPNN_ORACLE_HPP
