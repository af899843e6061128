// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_FORMAT_HPP
#define LPNN_FORMAT_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "lpnn/errors.hpp"

namespace lpnn {

enum class Kind { Posit, Float, Fixed };

/// Description of one low-precision number format.
///
/// posit<n,es>  tapered-precision, sign + regime + es exponent bits
/// float<we,wf> sign + we exponent bits + wf fraction bits, n = 1+we+wf
/// fixed<n,q>   two's complement with q fraction bits
struct FormatSpec {
  Kind kind = Kind::Posit;
  int n = 0;   // total bits
  int es = 0;  // posit exponent bits
  int we = 0;  // float exponent bits
  int wf = 0;  // float fraction bits
  int q = 0;   // fixed fraction bits

  static FormatSpec posit(int n, int es) {
    if (n < 3 || n > 16 || es < 0 || es > 4 || es > n - 3)
      throw UnknownFormatError("invalid posit<" + std::to_string(n) + "," +
                               std::to_string(es) + ">");
    FormatSpec s;
    s.kind = Kind::Posit;
    s.n = n;
    s.es = es;
    return s;
  }

  static FormatSpec flt(int n, int we) {
    int wf = n - 1 - we;
    if (we < 2 || we > 8 || wf < 1 || n > 32)
      throw UnknownFormatError("invalid float<" + std::to_string(n) + ",e" +
                               std::to_string(we) + ">");
    FormatSpec s;
    s.kind = Kind::Float;
    s.n = n;
    s.we = we;
    s.wf = wf;
    return s;
  }

  static FormatSpec fixed(int n, int q) {
    if (n < 2 || n > 32 || q < 0 || q > n - 1)
      throw UnknownFormatError("invalid fixed<" + std::to_string(n) + "," +
                               std::to_string(q) + ">");
    FormatSpec s;
    s.kind = Kind::Fixed;
    s.n = n;
    s.q = q;
    return s;
  }

  friend bool operator==(const FormatSpec& a, const FormatSpec& b) {
    if (a.kind != b.kind || a.n != b.n) return false;
    switch (a.kind) {
      case Kind::Posit: return a.es == b.es;
      case Kind::Float: return a.we == b.we;
      case Kind::Fixed: return a.q == b.q;
    }
    return false;
  }
  friend bool operator!=(const FormatSpec& a, const FormatSpec& b) {
    return !(a == b);
  }
};

/// An n-bit pattern in a given format. Only the low spec.n bits are
/// significant.
struct Code {
  std::uint32_t bits = 0;
  FormatSpec spec;

  friend bool operator==(const Code& a, const Code& b) {
    return a.bits == b.bits && a.spec == b.spec;
  }
  friend bool operator!=(const Code& a, const Code& b) { return !(a == b); }
};

inline std::uint32_t low_mask(int bits) {
  return bits >= 32 ? 0xffffffffu : ((1u << bits) - 1u);
}

/// Whether `bits` is the posit NaR pattern 10...0.
inline bool is_nar(const Code& c) {
  return c.spec.kind == Kind::Posit &&
         c.bits == (1u << (c.spec.n - 1));
}

inline Code zero_code(const FormatSpec& spec) { return Code{0, spec}; }

/// Format tag grammar: posit8es0, float8e4, fixed8q4.
inline std::string format_tag(const FormatSpec& spec) {
  switch (spec.kind) {
    case Kind::Posit:
      return "posit" + std::to_string(spec.n) + "es" + std::to_string(spec.es);
    case Kind::Float:
      return "float" + std::to_string(spec.n) + "e" + std::to_string(spec.we);
    case Kind::Fixed:
      return "fixed" + std::to_string(spec.n) + "q" + std::to_string(spec.q);
  }
  return "";
}

inline FormatSpec parse_format_tag(std::string_view tag) {
  auto fail = [&] {
    throw UnknownFormatError("unknown format tag '" + std::string(tag) + "'");
  };
  auto read_int = [&](std::string_view& s) {
    int v = 0;
    std::size_t i = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      v = v * 10 + (s[i] - '0');
      ++i;
    }
    if (i == 0) fail();
    s.remove_prefix(i);
    return v;
  };
  std::string_view s = tag;
  try {
    if (s.substr(0, 5) == "posit") {
      s.remove_prefix(5);
      int n = read_int(s);
      if (s.substr(0, 2) != "es") fail();
      s.remove_prefix(2);
      int es = read_int(s);
      if (!s.empty()) fail();
      return FormatSpec::posit(n, es);
    }
    if (s.substr(0, 5) == "float") {
      s.remove_prefix(5);
      int n = read_int(s);
      if (s.substr(0, 1) != "e") fail();
      s.remove_prefix(1);
      int we = read_int(s);
      if (!s.empty()) fail();
      return FormatSpec::flt(n, we);
    }
    if (s.substr(0, 5) == "fixed") {
      s.remove_prefix(5);
      int n = read_int(s);
      if (s.substr(0, 1) != "q") fail();
      s.remove_prefix(1);
      int q = read_int(s);
      if (!s.empty()) fail();
      return FormatSpec::fixed(n, q);
    }
  } catch (const UnknownFormatError&) {
    throw;
  }
  fail();
  return {};
}

}  // namespace lpnn

#endif  // LPNN_FORMAT_HPP
