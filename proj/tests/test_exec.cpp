// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fftgen/driver.hpp"
#include "fftgen/exec.hpp"
#include "fftgen/verify.hpp"

using namespace fftgen;

namespace {

ComplexBuffer run_config(const PipelineConfig &config, const std::vector<cplx> &x,
                         int threads = 1) {
  const CompiledPipeline compiled = compile_pipeline(config);
  ExecOptions opts;
  opts.threads = threads;
  return interpret(compiled.final_ir,
                   ComplexBuffer::from_vector(x, config.layout), opts);
}

bool have_cc() { return std::system("cc --version > /dev/null 2>&1") == 0; }

// Compiles the emitted function together with a tiny driver that reads 2n
// doubles from stdin and prints the transform output in hex floats.
std::vector<double> compile_and_run(const std::string &c_source, int64_t n,
                                    const std::vector<double> &input) {
  const std::string dir = "/tmp/fftgen_emit_test";
  REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);
  const std::string src = dir + "/fft.c";
  const std::string exe = dir + "/fft";
  {
    std::ofstream out(src);
    out << c_source;
    out << "#include <stdio.h>\n"
        << "int main(void) {\n"
        << "  static double in[" << 2 * n << "], out[" << 2 * n << "];\n"
        << "  for (long i = 0; i < " << 2 * n << "; ++i)\n"
        << "    if (scanf(\"%la\", &in[i]) != 1) return 1;\n"
        << "  fft(in, out, " << n << ");\n"
        << "  for (long i = 0; i < " << 2 * n << "; ++i) printf(\"%a\\n\", out[i]);\n"
        << "  return 0;\n"
        << "}\n";
  }
  REQUIRE(std::system(("cc -std=c99 -O2 -o " + exe + " " + src).c_str()) == 0);

  const std::string in_file = dir + "/in.txt";
  {
    std::ofstream out(in_file);
    char buf[48];
    for (double v : input) {
      std::snprintf(buf, sizeof buf, "%a", v);
      out << buf << "\n";
    }
  }
  const std::string out_file = dir + "/out.txt";
  REQUIRE(std::system((exe + " < " + in_file + " > " + out_file).c_str()) == 0);

  std::vector<double> result;
  std::ifstream in(out_file);
  std::string line;
  while (std::getline(in, line))
    result.push_back(std::strtod(line.c_str(), nullptr));
  return result;
}

} // namespace

TEST_CASE("transform of a delta is the all-ones vector") {
  PipelineConfig config;
  config.n = 4;
  std::vector<cplx> x(4, cplx{0.0, 0.0});
  x[0] = {1.0, 0.0};
  const auto out = run_config(config, x).to_vector();
  for (const cplx &v : out) {
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("size-2 transform of (1, 2)") {
  PipelineConfig config;
  config.n = 2;
  const auto out = run_config(config, {cplx{1.0, 0.0}, cplx{2.0, 0.0}}).to_vector();
  CHECK(out[0] == cplx{3.0, 0.0});
  CHECK(out[1] == cplx{-1.0, 0.0});
}

TEST_CASE("size-8 pipeline matches the brute-force oracle") {
  const auto x = seeded_input(8, 77);
  const auto want = dft_oracle(x);
  for (Algorithm alg : {Algorithm::CooleyTukey, Algorithm::Stockham}) {
    PipelineConfig config;
    config.n = 8;
    config.algorithm = alg;
    const auto got = run_config(config, x).to_vector();
    CHECK(error_metric(got, want) < 1e-7);
  }
}

TEST_CASE("interpretation is pure and thread-count independent") {
  PipelineConfig config;
  config.n = 64;
  config.vec = VecMode::Inner;
  config.interleaved_opt = true;
  const auto x = seeded_input(64, 13);
  const auto a = run_config(config, x);
  const auto b = run_config(config, x);
  const auto threaded = run_config(config, x, 4);
  CHECK(std::memcmp(a.data.data(), b.data.data(),
                    a.data.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.data.data(), threaded.data.data(),
                    a.data.size() * sizeof(double)) == 0);
}

TEST_CASE("emitted C for the empty pipeline copies its input") {
  LoopProgram prog = lower_complex(bufferize({}, 4), ComplexLayout::Interleaved);
  const std::string text = emit_c(prog, "fft");
  CHECK(text.find("void fft(const double* restrict in") != std::string::npos);
  if (!have_cc())
    return;
  std::vector<double> input(8);
  for (size_t i = 0; i < input.size(); ++i)
    input[i] = 0.25 * static_cast<double>(i) - 1.0;
  CHECK(compile_and_run(text, 4, input) == input);
}

TEST_CASE("emitted C has one top-level loop per fused operator") {
  PipelineConfig config;
  config.n = 4;
  const CompiledPipeline compiled = compile_pipeline(config);
  REQUIRE(compiled.fused.ops.size() == 4);
  const std::string text = emit_c(compiled.final_ir, "fft");
  size_t nests = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind("  for (long i", 0) == 0) // top-level loop headers only
      ++nests;
  CHECK(nests == 4);
}

TEST_CASE("emitted C keeps the tiled outer/inner pair") {
  PipelineConfig config;
  config.n = 16;
  config.tile = TilePolicy::exact(4);
  const std::string text = emit_c(compile_pipeline(config).final_ir, "fft");
  CHECK(text.find("    for (long i") != std::string::npos); // nested header
}

TEST_CASE("emission requires fully lowered scalar programs") {
  LoopProgram complex_ir = bufferize(fuse(*plan_cooley_tukey(4, 2)).ops, 4);
  CHECK_THROWS_AS(emit_c(complex_ir, "fft"), LowerError);

  PipelineConfig config;
  config.n = 16;
  config.vec = VecMode::Inner;
  CHECK_THROWS_AS(emit_c(compile_pipeline(config).final_ir, "fft"), LowerError);
}

TEST_CASE("emitted C is deterministic text") {
  PipelineConfig config;
  config.n = 8;
  const std::string a = emit_c(compile_pipeline(config).final_ir, "fft");
  const std::string b = emit_c(compile_pipeline(config).final_ir, "fft");
  CHECK(a == b);
}

TEST_CASE("emitted C agrees with the interpreter on shared vectors") {
  if (!have_cc())
    return;
  for (int64_t n : {4, 8, 16}) {
    for (ComplexLayout layout :
         {ComplexLayout::Interleaved, ComplexLayout::Split}) {
      CAPTURE(n);
      PipelineConfig config;
      config.n = n;
      config.layout = layout;
      if (n == 16)
        config.tile = TilePolicy::exact(4);
      const CompiledPipeline compiled = compile_pipeline(config);
      const auto x = seeded_input(n, 1234 + n);
      const ComplexBuffer in = ComplexBuffer::from_vector(x, layout);
      const ComplexBuffer want = interpret(compiled.final_ir, in);
      const std::vector<double> got =
          compile_and_run(emit_c(compiled.final_ir, "fft"), n, in.data);
      REQUIRE(got.size() == want.data.size());
      for (size_t i = 0; i < got.size(); ++i)
        CHECK(std::abs(got[i] - want.data[i]) < 1e-12);
    }
  }
}
