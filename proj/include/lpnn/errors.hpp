// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_ERRORS_HPP
#define LPNN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lpnn {

/// Base class for all lpnn errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A decoded number does not fit the requested format exactly.
class NotRepresentableError : public Error {
 public:
  using Error::Error;
};

/// A posit NaR code was passed where a real value is required.
class NaRError : public Error {
 public:
  using Error::Error;
};

/// A float code with the reserved all-ones exponent field (NaN / Inf).
class ReservedInputError : public Error {
 public:
  using Error::Error;
};

/// Paired input vectors differ in length.
class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions do not chain.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// A code or model does not match the expected format.
class FormatMismatchError : public Error {
 public:
  using Error::Error;
};

/// A wide accumulator exceeded its declared register width.
class QuireOverflowError : public Error {
 public:
  using Error::Error;
};

/// Format tag string that names no valid format.
class UnknownFormatError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (CSV, model, ...), with row/column diagnostics.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or training configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class NonFiniteLossError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpnn

#endif  // LPNN_ERRORS_HPP
