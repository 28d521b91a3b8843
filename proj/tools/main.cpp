// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Command-line front end: compile (inspect any stage), run, verify against
// the brute-force oracle, and benchmark. Exit codes: 0 success, 1 failed
// verification or runtime error, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fftgen/driver.hpp"
#include "fftgen/exec.hpp"
#include "fftgen/gpumap.hpp"
#include "fftgen/verify.hpp"

namespace {

using namespace fftgen;

bool is_pow2(int64_t n) { return n >= 1 && (n & (n - 1)) == 0; }

struct StageFlags {
  int64_t size = 0;
  std::string algorithm = "cooley-tukey";
  int64_t radix = 2;
  std::string layout = "interleaved";
  std::string vectorize = "none";
  int64_t vector_width = 8;
  bool interleaved_opt = false;
  int64_t tile_size = 0;
  int64_t tile_cache = 0;

  void add_to(CLI::App *cmd, bool with_size = true) {
    if (with_size)
      cmd->add_option("--size", size, "transform size (power of two)")
          ->required();
    cmd->add_option("--algorithm", algorithm)
        ->check(CLI::IsMember({"cooley-tukey", "stockham"}));
    cmd->add_option("--radix", radix, "decomposition radix (power of two)");
    cmd->add_option("--layout", layout)
        ->check(CLI::IsMember({"interleaved", "split"}));
    cmd->add_option("--vectorize", vectorize)
        ->check(CLI::IsMember({"none", "inner", "outer"}));
    cmd->add_option("--vector-width", vector_width, "lanes per vector op");
    cmd->add_flag("--interleaved-opt", interleaved_opt,
                  "deinterleave complex pairs with shuffles (interleaved only)");
    auto *ts = cmd->add_option("--tile-size", tile_size, "exact tile size");
    cmd->add_option("--tile-cache", tile_cache,
                    "tile to fit this many bytes of cache")
        ->excludes(ts);
  }

  PipelineConfig to_config() const {
    if (!is_pow2(size))
      throw CLI::ValidationError("--size", "must be a power of two");
    if (!is_pow2(radix) || radix < 2)
      throw CLI::ValidationError("--radix", "must be a power of two >= 2");
    if (interleaved_opt && layout == "split")
      throw CLI::ValidationError(
          "--interleaved-opt", "only applies to the interleaved layout");
    PipelineConfig config;
    config.n = size;
    config.algorithm = algorithm == "stockham" ? Algorithm::Stockham
                                               : Algorithm::CooleyTukey;
    config.radix = radix;
    config.layout = layout == "split" ? ComplexLayout::Split
                                      : ComplexLayout::Interleaved;
    config.vec = vectorize == "none"    ? VecMode::None
                 : vectorize == "inner" ? VecMode::Inner
                                        : VecMode::Outer;
    config.vector_width = vector_width;
    config.interleaved_opt = interleaved_opt;
    if (tile_size > 0)
      config.tile = TilePolicy::exact(tile_size);
    else if (tile_cache > 0)
      config.tile = TilePolicy::cache(tile_cache);
    return config;
  }
};

// "16..4096" (power-of-two range) or a comma list like "16,32,64".
std::vector<int64_t> parse_sizes(const std::string &text) {
  std::vector<int64_t> sizes;
  const size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const int64_t lo = std::stoll(text.substr(0, dots));
    const int64_t hi = std::stoll(text.substr(dots + 2));
    if (!is_pow2(lo) || !is_pow2(hi) || lo > hi)
      throw CLI::ValidationError("--sizes", "range must be powers of two");
    for (int64_t n = lo; n <= hi; n *= 2)
      sizes.push_back(n);
    return sizes;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    sizes.push_back(std::stoll(item));
  for (int64_t n : sizes)
    if (!is_pow2(n))
      throw CLI::ValidationError("--sizes", "sizes must be powers of two");
  if (sizes.empty())
    throw CLI::ValidationError("--sizes", "no sizes given");
  return sizes;
}

std::vector<cplx> read_input_file(const std::string &path, int64_t n) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open input file " + path);
  std::vector<cplx> x;
  double re = 0.0, im = 0.0;
  while (in >> re >> im)
    x.emplace_back(re, im);
  if (static_cast<int64_t>(x.size()) != n)
    throw Error("input file holds " + std::to_string(x.size()) +
                " values, expected " + std::to_string(n));
  return x;
}

int cmd_compile(const StageFlags &flags, const std::string &emit) {
  if (emit == "c" && flags.vectorize != "none")
    throw CLI::ValidationError(
        "--emit", "c emission is scalar only; use --vectorize none");
  const PipelineConfig config = flags.to_config();
  const CompiledPipeline compiled = compile_pipeline(config);
  for (const std::string &diag : compiled.fused.diagnostics)
    std::cerr << "warning: " << diag << "\n";

  if (emit == "formula")
    std::cout << print_formula(*compiled.formula) << "\n";
  else if (emit == "ir")
    std::cout << print_pipeline(compiled.fused.ops);
  else if (emit == "loops")
    std::cout << print_program(compiled.final_ir);
  else if (emit == "c")
    std::cout << emit_c(compiled.final_ir, "fft");
  else
    std::cout << print_kernels(compiled.final_ir,
                               extract_kernels(compiled.final_ir));
  return 0;
}

int cmd_run(const StageFlags &flags, const std::string &input_file,
            int64_t random_seed, bool have_seed) {
  const PipelineConfig config = flags.to_config();
  const std::vector<cplx> x =
      have_seed ? seeded_input(config.n, static_cast<uint64_t>(random_seed))
                : read_input_file(input_file, config.n);
  const CompiledPipeline compiled = compile_pipeline(config);
  const ComplexBuffer out = interpret(
      compiled.final_ir, ComplexBuffer::from_vector(x, config.layout));
  for (int64_t j = 0; j < out.logical_len; ++j) {
    const cplx v = out.get(j);
    std::printf("%.17g %.17g\n", v.real(), v.imag());
  }
  return 0;
}

int cmd_verify(const std::string &sizes_text, int inputs) {
  const std::vector<int64_t> sizes = parse_sizes(sizes_text);
  const auto cases = run_verification(sizes, inputs);
  int failures = 0;
  for (const VerifyCase &vc : cases) {
    std::printf("%s %s err=%.3e\n", vc.pass ? "PASS" : "FAIL",
                describe_config(vc.config).c_str(), vc.max_error);
    failures += !vc.pass;
  }
  std::printf("%zu configurations, %d failed\n", cases.size(), failures);
  return failures == 0 ? 0 : 1;
}

int cmd_bench(StageFlags flags, const std::string &sizes_text, int64_t repeats,
              const std::string &csv_path) {
  const std::vector<int64_t> sizes = parse_sizes(sizes_text);
  std::ofstream csv(csv_path);
  if (!csv)
    throw Error("cannot open " + csv_path + " for writing");
  csv << bench_csv_header() << "\n";
  for (int64_t n : sizes) {
    flags.size = n;
    const BenchResult r = bench(flags.to_config(), repeats);
    csv << bench_csv_row(r) << "\n";
    std::printf("%s mean=%.3es rate=%.1f mflops\n",
                describe_config(r.config).c_str(), r.mean_seconds,
                r.rate_mflops);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"FFT formula compiler: plan, fuse, lower, transform, execute"};
  app.require_subcommand(1);

  StageFlags compile_flags;
  std::string emit;
  CLI::App *compile = app.add_subcommand("compile", "print a pipeline stage");
  compile_flags.add_to(compile);
  compile->add_option("--emit", emit, "stage to print")
      ->required()
      ->check(CLI::IsMember({"formula", "ir", "loops", "c", "kernels"}));

  StageFlags run_flags;
  std::string input_file;
  int64_t random_seed = 0;
  CLI::App *run = app.add_subcommand("run", "execute a transform");
  run_flags.add_to(run);
  auto *in_opt = run->add_option("--input", input_file,
                                 "file of 're im' lines, one per element");
  auto *seed_opt =
      run->add_option("--random", random_seed, "seeded random input");
  seed_opt->excludes(in_opt);

  std::string verify_sizes = "16..4096";
  int verify_inputs = 5;
  CLI::App *verify = app.add_subcommand("verify", "oracle conformance sweep");
  verify->add_option("--sizes", verify_sizes, "range 'A..B' or list 'a,b,c'");
  verify->add_option("--inputs", verify_inputs, "random inputs per config");

  StageFlags bench_flags;
  std::string bench_sizes;
  std::string csv_path;
  int64_t repeats = 1000;
  CLI::App *bench_cmd = app.add_subcommand("bench", "timing sweep to CSV");
  bench_flags.add_to(bench_cmd, false);
  bench_cmd->add_option("--sizes", bench_sizes)->required();
  bench_cmd->add_option("--repeats", repeats, "runs per configuration");
  bench_cmd->add_option("--csv", csv_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
    if (compile->parsed())
      return cmd_compile(compile_flags, emit);
    if (run->parsed()) {
      if (!*in_opt && !*seed_opt)
        throw CLI::ValidationError("run", "need --input FILE or --random SEED");
      return cmd_run(run_flags, input_file, random_seed, seed_opt->count() > 0);
    }
    if (verify->parsed())
      return cmd_verify(verify_sizes, verify_inputs);
    return cmd_bench(bench_flags, bench_sizes, repeats, csv_path);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  } catch (const fftgen::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
