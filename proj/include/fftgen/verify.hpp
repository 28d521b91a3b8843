// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Ground truth and measurement: the brute-force DFT oracle, the error metric
// compiled pipelines are held to, FLOP-rate accounting and the benchmark
// harness with its CSV output.

#ifndef FFTGEN_VERIFY_HPP
#define FFTGEN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fftgen/driver.hpp"
#include "fftgen/matrix.hpp"

namespace fftgen {

/// Direct O(N^2) double-sum DFT: X[j] = sum_k x[k] * exp(-2*pi*i*j*k/N).
std::vector<cplx> dft_oracle(const std::vector<cplx> &x);

/// max_j |a[j] - b[j]| / N.
double error_metric(const std::vector<cplx> &a, const std::vector<cplx> &b);

/// 5*N*log2(N) / seconds / 1e6, the customary FFT rate normalization.
double mflops(int64_t n, double seconds);

/// Deterministic test input: re/im uniform in [-1, 1), identical on every
/// platform for a given seed.
std::vector<cplx> seeded_input(int64_t n, uint64_t seed);

struct BenchResult {
  PipelineConfig config;
  int64_t repeats = 0;
  double mean_seconds = 0.0;
  double rate_mflops = 0.0;
  uint64_t seed = 0;
};

/// Compiles the configuration, runs it `repeats` times over one fixed seeded
/// input and reports the mean wall time.
BenchResult bench(const PipelineConfig &config, int64_t repeats = 1000,
                  uint64_t seed = 1);

std::string bench_csv_header();
std::string bench_csv_row(const BenchResult &r);

struct VerifyCase {
  PipelineConfig config;
  double max_error = 0.0;
  bool pass = false;
};

/// Runs the full configuration matrix (both algorithms, radices {2,4,16}
/// where they divide, both layouts, every vectorization mode) against the
/// oracle with `inputs` seeded vectors per configuration.
std::vector<VerifyCase> run_verification(const std::vector<int64_t> &sizes,
                                         int inputs = 5);

std::string describe_config(const PipelineConfig &config);

} // namespace fftgen

#endif // FFTGEN_VERIFY_HPP
