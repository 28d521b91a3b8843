// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Loop-to-kernel extraction: each parallel loop nest becomes a GPU-style
// kernel whose grid/block sizes come from the loop trip counts. Kernels are
// simulated on the host so the mapping can be verified without hardware.

#ifndef FFTGEN_GPUMAP_HPP
#define FFTGEN_GPUMAP_HPP

#include <string>
#include <vector>

#include "fftgen/loopir.hpp"

namespace fftgen {

/// How one induction variable is recovered from the launch coordinates:
/// iv = lower + linear_index * step, where linear_index comes from the
/// named grid/block dimension (or both for a split single loop).
struct KernelBinding {
  int32_t var = 0;
  int64_t lower = 0;
  int64_t step = 1;
  int64_t block_extent = 1; // lanes covered by the block part of the index
  int32_t grid_dim = -1;    // -1: not part of the grid
  int32_t block_dim = -1;   // -1: not part of the block
};

struct KernelDescriptor {
  std::vector<int64_t> grid_dims;
  std::vector<int64_t> block_dims;
  std::vector<KernelBinding> bindings;
  std::vector<Stmt> body;
  std::vector<int32_t> registered_buffers;
  int32_t num_regs = 0;
  int64_t lanes = 1; // vector width the body statements expect
  std::string label;
};

struct GpuMapOptions {
  int64_t block_size = 256; // default 1-D block, capped at the trip count
};

/// One descriptor per nest. A single loop of trip T maps to grid ceil(T/B),
/// block B (B capped at T and kept an exact divisor so grid*block == T);
/// 2- and 3-deep nests map outer loop to the grid and inner loops to block
/// dimensions. Deeper nests and non-parallel loops are rejected.
std::vector<KernelDescriptor> extract_kernels(const LoopProgram &prog,
                                              const GpuMapOptions &opts = {});

/// Executes every (block, thread) coordinate of each kernel in order, with a
/// full barrier between kernels. Bodies may only touch registered buffers.
/// The result equals interpret() on the source program bitwise.
ComplexBuffer simulate_kernels(const LoopProgram &prog,
                               const std::vector<KernelDescriptor> &kernels,
                               const ComplexBuffer &input);

/// Stable text dump for --emit kernels.
std::string print_kernels(const LoopProgram &prog,
                          const std::vector<KernelDescriptor> &kernels);

} // namespace fftgen

#endif // FFTGEN_GPUMAP_HPP
