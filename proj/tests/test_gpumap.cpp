// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "fftgen/driver.hpp"
#include "fftgen/exec.hpp"
#include "fftgen/gpumap.hpp"
#include "fftgen/verify.hpp"

using namespace fftgen;

namespace {

LoopProgram single_loop_program(int64_t trip) {
  LoopProgram prog;
  prog.n = trip;
  prog.layout = ComplexLayout::Interleaved;
  prog.buffers.push_back(BufferDecl{"b0", BufKind::Main, trip, {}});
  prog.buffers.push_back(BufferDecl{"b1", BufKind::Main, trip, {}});
  prog.in_buf = 0;
  prog.out_buf = 1;
  LoopNest nest;
  const int32_t i = prog.next_var++;
  nest.loops.push_back(Loop{i, 0, trip, 1, true, {}, {}});
  nest.body.push_back(FLoad{0, 0, AffineExpr::var(i)});
  nest.body.push_back(FStore{Operand::r(0), 1, AffineExpr::var(i)});
  nest.num_regs = 1;
  nest.label = "Copy";
  prog.nests.push_back(std::move(nest));
  return prog;
}

} // namespace

TEST_CASE("single loops split into grid and block by the default block size") {
  LoopProgram prog = single_loop_program(1024);
  const auto kernels = extract_kernels(prog);
  REQUIRE(kernels.size() == 1);
  CHECK(kernels[0].grid_dims == std::vector<int64_t>{4});
  CHECK(kernels[0].block_dims == std::vector<int64_t>{256});
}

TEST_CASE("short loops cap the block at the trip count") {
  LoopProgram prog = single_loop_program(10);
  const auto kernels = extract_kernels(prog);
  REQUIRE(kernels.size() == 1);
  CHECK(kernels[0].grid_dims == std::vector<int64_t>{1});
  CHECK(kernels[0].block_dims == std::vector<int64_t>{10});
}

TEST_CASE("two-level nests map outer to grid and inner to block") {
  std::vector<FusedOp> ops{Permute{8, 128}}; // loops (8, 16)
  LoopProgram prog = bufferize(ops, 128);
  const auto kernels = extract_kernels(prog);
  REQUIRE(kernels.size() == 1);
  CHECK(kernels[0].grid_dims == std::vector<int64_t>{8});
  CHECK(kernels[0].block_dims == std::vector<int64_t>{16});
}

TEST_CASE("grid-block product conserves the iteration count") {
  for (int64_t n : {16, 64, 256, 1024}) {
    PipelineConfig config;
    config.n = n;
    CAPTURE(n);
    CompiledPipeline compiled = compile_pipeline(config);
    const auto kernels = extract_kernels(compiled.final_ir);
    REQUIRE(kernels.size() == compiled.final_ir.nests.size());
    for (size_t i = 0; i < kernels.size(); ++i) {
      int64_t nest_iters = 1;
      for (const Loop &l : compiled.final_ir.nests[i].loops)
        nest_iters *= loop_trip_count(l);
      int64_t kernel_iters = 1;
      for (int64_t g : kernels[i].grid_dims)
        kernel_iters *= g;
      for (int64_t b : kernels[i].block_dims)
        kernel_iters *= b;
      CHECK(kernel_iters == nest_iters);
    }
  }
}

TEST_CASE("kernel simulation matches the interpreter bitwise") {
  for (int64_t n : {4, 16, 64, 256, 1024}) {
    for (Algorithm alg : {Algorithm::CooleyTukey, Algorithm::Stockham}) {
      for (int64_t radix : {2, 16}) {
        if (radix > n || n % radix != 0)
          continue;
        PipelineConfig config;
        config.n = n;
        config.algorithm = alg;
        config.radix = radix;
        CompiledPipeline compiled = compile_pipeline(config);
        const auto x = seeded_input(n, 42 + n);
        const ComplexBuffer in =
            ComplexBuffer::from_vector(x, config.layout);

        for (const LoopProgram *prog :
             {&compiled.complex_ir, &compiled.final_ir}) {
          const ComplexBuffer want = interpret(*prog, in.relayout(
              prog->layout ? *prog->layout : ComplexLayout::Interleaved));
          const auto kernels = extract_kernels(*prog);
          const ComplexBuffer got = simulate_kernels(
              *prog, kernels,
              in.relayout(prog->layout ? *prog->layout
                                       : ComplexLayout::Interleaved));
          CAPTURE(n);
          REQUIRE(got.data.size() == want.data.size());
          CHECK(std::memcmp(got.data.data(), want.data.data(),
                            got.data.size() * sizeof(double)) == 0);
        }
      }
    }
  }
}

TEST_CASE("vectorized pipelines simulate bitwise too") {
  PipelineConfig config;
  config.n = 256;
  config.vec = VecMode::Inner;
  config.interleaved_opt = true;
  CompiledPipeline compiled = compile_pipeline(config);
  const ComplexBuffer in =
      ComplexBuffer::from_vector(seeded_input(256, 9), config.layout);
  const ComplexBuffer want = interpret(compiled.final_ir, in);
  const ComplexBuffer got =
      simulate_kernels(compiled.final_ir, extract_kernels(compiled.final_ir), in);
  CHECK(std::memcmp(got.data.data(), want.data.data(),
                    got.data.size() * sizeof(double)) == 0);
}

TEST_CASE("an empty kernel list is the identity") {
  LoopProgram prog = lower_complex(bufferize({}, 8), ComplexLayout::Interleaved);
  const ComplexBuffer in =
      ComplexBuffer::from_vector(seeded_input(8, 3), ComplexLayout::Interleaved);
  const ComplexBuffer out = simulate_kernels(prog, {}, in);
  CHECK(std::memcmp(out.data.data(), in.data.data(),
                    in.data.size() * sizeof(double)) == 0);
}

TEST_CASE("touching an unregistered buffer is a device-access fault") {
  PipelineConfig config;
  config.n = 16;
  CompiledPipeline compiled = compile_pipeline(config);
  auto kernels = extract_kernels(compiled.final_ir);
  REQUIRE(!kernels.empty());
  kernels[0].registered_buffers.pop_back();
  const ComplexBuffer in =
      ComplexBuffer::from_vector(seeded_input(16, 1), config.layout);
  CHECK_THROWS_WITH_AS(simulate_kernels(compiled.final_ir, kernels, in),
                       doctest::Contains("unregistered"), ExecError);
}

TEST_CASE("extraction rejects non-parallel loops and deep nests") {
  LoopProgram prog = single_loop_program(8);
  prog.nests[0].loops[0].parallel = false;
  CHECK_THROWS_AS(extract_kernels(prog), GpuMapError);

  LoopProgram deep = single_loop_program(8);
  for (int extra = 0; extra < 3; ++extra) {
    Loop l{deep.next_var++, 0, 2, 1, true, {}, {}};
    deep.nests[0].loops.push_back(l);
  }
  CHECK_THROWS_AS(extract_kernels(deep), GpuMapError);
}

TEST_CASE("kernel dump is stable") {
  PipelineConfig config;
  config.n = 16;
  CompiledPipeline compiled = compile_pipeline(config);
  const auto kernels = extract_kernels(compiled.final_ir);
  const std::string a = print_kernels(compiled.final_ir, kernels);
  CHECK(a.find("grid=[") != std::string::npos);
  CHECK(a.find("threadIdx.x") != std::string::npos);
  CHECK(a == print_kernels(compiled.final_ir,
                           extract_kernels(compiled.final_ir)));
}
