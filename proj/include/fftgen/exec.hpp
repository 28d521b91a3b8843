// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#ifndef FFTGEN_EXEC_HPP
#define FFTGEN_EXEC_HPP

#include <string>

#include "fftgen/loopir.hpp"

namespace fftgen {

struct ExecOptions {
  // Workers used for parallel-marked outermost loops. Results are identical
  // for any thread count; iterations write disjoint slices.
  int threads = 1;
};

/// Reference interpreter: runs the loop nests over ping-pong buffers and
/// returns the transform output. Deterministic; vector statements execute
/// lane-by-lane in lane order, so vectorized and scalar programs agree
/// bitwise. Out-of-bounds accesses and layout mismatches throw ExecError.
ComplexBuffer interpret(const LoopProgram &prog, const ComplexBuffer &input,
                        const ExecOptions &opts = {});

/// Emits a self-contained C99 translation unit exposing
///   void <fn_name>(const double* in, double* out, long n);
/// over 2n doubles in the program's layout. Requires a fully scalar-float
/// program (no complex or vector statements). Deterministic text.
std::string emit_c(const LoopProgram &prog, const std::string &fn_name);

} // namespace fftgen

#endif // FFTGEN_EXEC_HPP
