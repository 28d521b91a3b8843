// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "fftgen/exec.hpp"

namespace fftgen {

std::vector<cplx> dft_oracle(const std::vector<cplx> &x) {
  const int64_t n = static_cast<int64_t>(x.size());
  // Shared root table; exponents reduced mod n so every twiddle is generated
  // exactly once, with the same convention as the formula materializer.
  std::vector<cplx> roots(n);
  for (int64_t t = 0; t < n; ++t)
    roots[t] = unit_root(n, t);
  std::vector<cplx> out(n);
  for (int64_t j = 0; j < n; ++j) {
    double acc_re = 0.0, acc_im = 0.0;
    for (int64_t k = 0; k < n; ++k) {
      const cplx w = roots[(j * k) % n];
      acc_re += w.real() * x[k].real() - w.imag() * x[k].imag();
      acc_im += w.real() * x[k].imag() + w.imag() * x[k].real();
    }
    out[j] = {acc_re, acc_im};
  }
  return out;
}

double error_metric(const std::vector<cplx> &a, const std::vector<cplx> &b) {
  if (a.size() != b.size())
    throw DimensionError("error metric needs equal-length vectors");
  double worst = 0.0;
  for (size_t j = 0; j < a.size(); ++j)
    worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst / static_cast<double>(a.size());
}

double mflops(int64_t n, double seconds) {
  return 5.0 * static_cast<double>(n) * std::log2(static_cast<double>(n)) /
         seconds / 1e6;
}

namespace {

uint64_t splitmix64(uint64_t &state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_double(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

std::vector<cplx> seeded_input(int64_t n, uint64_t seed) {
  uint64_t state = seed;
  std::vector<cplx> x(n);
  for (int64_t j = 0; j < n; ++j) {
    const double re = 2.0 * unit_double(splitmix64(state)) - 1.0;
    const double im = 2.0 * unit_double(splitmix64(state)) - 1.0;
    x[j] = {re, im};
  }
  return x;
}

BenchResult bench(const PipelineConfig &config, int64_t repeats, uint64_t seed) {
  const CompiledPipeline compiled = compile_pipeline(config);
  const ComplexBuffer input =
      ComplexBuffer::from_vector(seeded_input(config.n, seed), config.layout);

  using clock = std::chrono::steady_clock;
  const auto begin = clock::now();
  for (int64_t r = 0; r < repeats; ++r)
    interpret(compiled.final_ir, input);
  const auto end = clock::now();

  BenchResult result;
  result.config = config;
  result.repeats = repeats;
  result.mean_seconds =
      std::chrono::duration<double>(end - begin).count() /
      static_cast<double>(repeats);
  result.rate_mflops = mflops(config.n, result.mean_seconds);
  result.seed = seed;
  return result;
}

std::string bench_csv_header() {
  return "n,algorithm,radix,layout,vector_mode,repeats,mean_seconds,mflops,seed";
}

std::string bench_csv_row(const BenchResult &r) {
  char num[64];
  std::ostringstream out;
  out << r.config.n << "," << algorithm_name(r.config.algorithm) << ","
      << r.config.radix << "," << layout_name(r.config.layout) << ","
      << vec_mode_name(r.config) << "," << r.repeats << ",";
  std::snprintf(num, sizeof num, "%.9e", r.mean_seconds);
  out << num << ",";
  std::snprintf(num, sizeof num, "%.6f", r.rate_mflops);
  out << num << "," << r.seed;
  return out.str();
}

std::string describe_config(const PipelineConfig &config) {
  std::ostringstream out;
  out << "n=" << config.n << " alg=" << algorithm_name(config.algorithm)
      << " radix=" << config.radix << " layout=" << layout_name(config.layout)
      << " vec=" << vec_mode_name(config);
  return out.str();
}

std::vector<VerifyCase> run_verification(const std::vector<int64_t> &sizes,
                                         int inputs) {
  std::vector<VerifyCase> cases;
  std::map<std::pair<int64_t, uint64_t>, std::vector<cplx>> oracle_cache;

  for (int64_t n : sizes) {
    for (int t = 0; t < inputs; ++t) {
      const uint64_t seed = 1 + static_cast<uint64_t>(t);
      if (!oracle_cache.count({n, seed}))
        oracle_cache[{n, seed}] = dft_oracle(seeded_input(n, seed));
    }
    for (Algorithm alg : {Algorithm::CooleyTukey, Algorithm::Stockham}) {
      for (int64_t radix : {2, 4, 16}) {
        if (radix > n || n % radix != 0)
          continue;
        for (ComplexLayout layout :
             {ComplexLayout::Interleaved, ComplexLayout::Split}) {
          std::vector<std::pair<VecMode, bool>> modes = {
              {VecMode::None, false}, {VecMode::Inner, false},
              {VecMode::Outer, false}};
          if (layout == ComplexLayout::Interleaved) {
            modes.push_back({VecMode::Inner, true});
            modes.push_back({VecMode::Outer, true});
          }
          for (const auto &[vec, opt] : modes) {
            PipelineConfig config;
            config.n = n;
            config.algorithm = alg;
            config.radix = radix;
            config.layout = layout;
            config.vec = vec;
            config.interleaved_opt = opt;

            const CompiledPipeline compiled = compile_pipeline(config);
            VerifyCase vc;
            vc.config = config;
            vc.max_error = 0.0;
            for (int t = 0; t < inputs; ++t) {
              const uint64_t seed = 1 + static_cast<uint64_t>(t);
              const auto x = seeded_input(n, seed);
              const ComplexBuffer out = interpret(
                  compiled.final_ir, ComplexBuffer::from_vector(x, layout));
              vc.max_error = std::max(
                  vc.max_error,
                  error_metric(out.to_vector(), oracle_cache[{n, seed}]));
            }
            vc.pass = vc.max_error < 1e-7;
            cases.push_back(std::move(vc));
          }
        }
      }
    }
  }
  return cases;
}

} // namespace fftgen
