// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#ifndef FFTGEN_ERROR_HPP
#define FFTGEN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fftgen {

/// Base class for all errors raised by the compiler pipeline.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Malformed DSL input. Carries the 1-based source position.
class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line(line), column(column) {}
  int line;
  int column;
};

/// Operator dimensions do not line up (composition of unequal sizes, etc.).
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Invalid planner request (non-power-of-two size, bad radix, size cap).
class PlanError : public Error {
public:
  using Error::Error;
};

/// Fusion could not keep within its kernel/dense size limits.
class FuseError : public Error {
public:
  using Error::Error;
};

/// Loop-level transform rejected its input.
class LowerError : public Error {
public:
  using Error::Error;
};

/// Runtime failure while executing loop IR (out-of-bounds, layout mismatch).
class ExecError : public Error {
public:
  using Error::Error;
};

/// Statically detected out-of-bounds slice access.
class BoundsError : public Error {
public:
  using Error::Error;
};

/// Kernel extraction/simulation failure.
class GpuMapError : public Error {
public:
  using Error::Error;
};

} // namespace fftgen

#endif // FFTGEN_ERROR_HPP
