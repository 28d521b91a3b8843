// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Internal statement executor shared by the interpreter and the GPU-kernel
// simulator. Executes loop IR statements against flat float buffers with
// runtime bounds checks; vector statements run lane-by-lane in lane order so
// results are bit-identical to scalar execution.

#ifndef FFTGEN_SRC_MACHINE_HPP
#define FFTGEN_SRC_MACHINE_HPP

#include <span>
#include <vector>

#include "fftgen/loopir.hpp"

namespace fftgen::detail {

/// Per-execution-context state: induction variable bindings plus the register
/// file. Buffers live in the Machine so contexts can run concurrently over
/// disjoint output slices.
struct Frame {
  std::vector<int64_t> env; // indexed by induction variable id
  std::vector<double> regs; // num_regs * lanes, lane-major per register
  int64_t lanes = 1;
};

class Machine {
public:
  explicit Machine(const LoopProgram &prog);

  /// Copies a user buffer into the pipeline input buffer. In float mode the
  /// input layout must match the program layout; in complex mode any layout
  /// is accepted.
  void load_input(const ComplexBuffer &input);

  ComplexBuffer output() const;

  /// Runs every nest in order; parallel-marked outermost loops are split
  /// across `threads` workers (each with its own Frame).
  void run(int threads = 1);

  void run_nest(const LoopNest &nest, int threads = 1);

  /// Executes one statement list under explicit variable bindings (used by
  /// the kernel simulator). `allowed` optionally restricts buffer access.
  void exec_body(Frame &frame, std::span<const Stmt> body,
                 const std::vector<char> *allowed = nullptr);

  const LoopProgram &program() const { return prog_; }
  std::vector<std::vector<double>> &buffers() { return bufs_; }

private:
  void loop_rec(Frame &frame, const LoopNest &nest, size_t level);
  void exec_stmt(Frame &frame, const Stmt &s);

  double load_float(int32_t buf, int64_t idx) const;
  void store_float(int32_t buf, int64_t idx, double v);
  cplx load_complex(int32_t buf, int64_t j) const;
  void store_complex(int32_t buf, int64_t j, cplx v);
  void check(int32_t buf, int64_t idx, int64_t limit) const;

  const LoopProgram &prog_;
  std::vector<std::vector<double>> bufs_; // 2*len floats per buffer
  const std::vector<char> *allowed_ = nullptr;
};

} // namespace fftgen::detail

#endif // FFTGEN_SRC_MACHINE_HPP
