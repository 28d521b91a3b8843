// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/driver.hpp"

namespace fftgen {

CompiledPipeline compile_pipeline(const PipelineConfig &config) {
  CompiledPipeline out;
  out.formula = config.algorithm == Algorithm::CooleyTukey
                    ? plan_cooley_tukey(config.n, config.radix)
                    : plan_stockham(config.n, config.radix);
  out.fused = fuse(*out.formula);
  out.complex_ir = bufferize(out.fused.ops, config.n);
  out.final_ir = lower_complex(out.complex_ir, config.layout);
  if (config.tile)
    out.final_ir = tile(out.final_ir, *config.tile);
  if (config.vec != VecMode::None) {
    VectorizeOptions vopts;
    vopts.width = config.vector_width;
    vopts.position =
        config.vec == VecMode::Inner ? VecPosition::Inner : VecPosition::Outer;
    vopts.interleaved_opt = config.interleaved_opt;
    out.final_ir = vectorize(out.final_ir, vopts);
  }
  // Every access of every emitted nest is provably in bounds before anything
  // executes; a violation here is a transform bug, not a user error.
  check_bounds(out.complex_ir);
  check_bounds(out.final_ir);
  return out;
}

std::string algorithm_name(Algorithm a) {
  return a == Algorithm::CooleyTukey ? "cooley-tukey" : "stockham";
}

std::string layout_name(ComplexLayout l) {
  return l == ComplexLayout::Interleaved ? "interleaved" : "split";
}

std::string vec_mode_name(const PipelineConfig &config) {
  if (config.vec == VecMode::None)
    return "none";
  std::string name = config.vec == VecMode::Inner ? "inner" : "outer";
  if (config.interleaved_opt)
    name += "-opt";
  return name;
}

} // namespace fftgen
