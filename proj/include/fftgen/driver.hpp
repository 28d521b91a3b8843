// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#ifndef FFTGEN_DRIVER_HPP
#define FFTGEN_DRIVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fftgen/formula.hpp"
#include "fftgen/loopir.hpp"
#include "fftgen/rewrite.hpp"

namespace fftgen {

enum class Algorithm { CooleyTukey, Stockham };

enum class VecMode { None, Inner, Outer };

/// Everything needed to build one pipeline end to end.
struct PipelineConfig {
  int64_t n = 0;
  Algorithm algorithm = Algorithm::CooleyTukey;
  int64_t radix = 2;
  ComplexLayout layout = ComplexLayout::Interleaved;
  VecMode vec = VecMode::None;
  int64_t vector_width = 8;
  bool interleaved_opt = false;
  std::optional<TilePolicy> tile;
};

struct CompiledPipeline {
  FormulaPtr formula;
  FuseResult fused;
  LoopProgram complex_ir; // right after bufferization
  LoopProgram final_ir;   // after layout lowering, tiling, vectorization
};

/// plan -> fuse -> bufferize -> lower_complex -> [tile] -> [vectorize].
CompiledPipeline compile_pipeline(const PipelineConfig &config);

std::string algorithm_name(Algorithm a);
std::string layout_name(ComplexLayout l);
/// "none", "inner", "outer", "inner-opt", "outer-opt" (CSV vector_mode).
std::string vec_mode_name(const PipelineConfig &config);

} // namespace fftgen

#endif // FFTGEN_DRIVER_HPP
