// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fftgen/driver.hpp"
#include "fftgen/exec.hpp"
#include "fftgen/gpumap.hpp"
#include "fftgen/verify.hpp"

using namespace fftgen;

namespace {

int failures = 0;

void report(int number, const std::string &name, bool pass,
            const std::string &detail) {
  std::printf("criterion %d (%s): %s%s%s\n", number, name.c_str(),
              pass ? "PASS" : "FAIL", detail.empty() ? "" : " -- ",
              detail.c_str());
  failures += !pass;
}

std::vector<int64_t> radices_for(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t r : {2, 4, 16})
    if (r <= n && n % r == 0)
      out.push_back(r);
  if (out.empty())
    out.push_back(2);
  return out;
}

bool bitwise_equal(const std::vector<double> &a, const std::vector<double> &b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::string run_cli(const std::string &args) {
  const std::string cmd =
      std::string(FFTGEN_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return "<popen failed>";
  std::string out;
  std::array<char, 4096> buf;
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), got);
  pclose(pipe);
  return out;
}

// 1. Every supported configuration meets the 1e-7 error bound on seeded
//    random inputs, sizes 16..4096.
void criterion_error_bound() {
  std::vector<int64_t> sizes;
  for (int64_t n = 16; n <= 4096; n *= 2)
    sizes.push_back(n);
  const auto cases = run_verification(sizes, 5);
  double worst = 0.0;
  std::string worst_cfg;
  int failed = 0;
  for (const VerifyCase &vc : cases) {
    if (vc.max_error > worst) {
      worst = vc.max_error;
      worst_cfg = describe_config(vc.config);
    }
    failed += !vc.pass;
  }
  std::ostringstream detail;
  detail << cases.size() << " configs, worst err " << worst << " (" << worst_cfg
         << ")";
  report(1, "error bound vs oracle < 1e-7", failed == 0, detail.str());
}

// 2. materialize(plan) equals the direct DFT matrix within 1e-12 for both
//    planners, N <= 256.
void criterion_formula_oracle() {
  double worst = 0.0;
  for (int64_t n = 2; n <= 256; n *= 2) {
    const ComplexMatrix reference = dft_matrix(n);
    for (int64_t r : radices_for(n)) {
      worst = std::max(worst, max_abs_diff(materialize(*plan_cooley_tukey(n, r)),
                                           reference));
      worst = std::max(
          worst, max_abs_diff(materialize(*plan_stockham(n, r)), reference));
    }
  }
  std::ostringstream detail;
  detail << "worst entry deviation " << worst;
  report(2, "planner matrices equal DFT within 1e-12", worst < 1e-12,
         detail.str());
}

// 3. Applying the fused pipeline equals materialize(formula) * x within
//    1e-10 for N <= 256, 20 random vectors.
void criterion_fusion_preservation() {
  double worst = 0.0;
  for (int64_t n = 2; n <= 256; n *= 2) {
    for (int64_t r : radices_for(n)) {
      for (FormulaPtr f : {plan_cooley_tukey(n, r), plan_stockham(n, r)}) {
        const FuseResult fused = fuse(*f);
        const ComplexMatrix m = materialize(*f);
        for (int t = 0; t < 20; ++t) {
          const auto x = seeded_input(n, 500 + t);
          const auto want = matvec(m, x);
          const auto got = apply_pipeline(fused.ops, x);
          double norm = 0.0, err = 0.0;
          for (int64_t j = 0; j < n; ++j) {
            norm = std::max(norm, std::abs(want[j]));
            err = std::max(err, std::abs(got[j] - want[j]));
          }
          worst = std::max(worst, err / norm);
        }
      }
    }
  }
  std::ostringstream detail;
  detail << "worst relative error " << worst;
  report(3, "fusion preserves semantics within 1e-10", worst < 1e-10,
         detail.str());
}

// 4. bufferize -> lower_complex -> tile -> vectorize each leave the
//    interpreted output unchanged within 1e-12; vectorized runs are
//    bitwise-equal to their scalar source programs.
void criterion_transform_invariance() {
  double worst = 0.0;
  bool bitwise_ok = true;
  for (int64_t n : {4, 16, 64, 256}) {
    for (Algorithm alg : {Algorithm::CooleyTukey, Algorithm::Stockham}) {
      FormulaPtr f = alg == Algorithm::CooleyTukey ? plan_cooley_tukey(n, 2)
                                                   : plan_stockham(n, 2);
      const FuseResult fused = fuse(*f);
      const LoopProgram complex_ir = bufferize(fused.ops, n);
      const auto x = seeded_input(n, 300 + n);
      const auto baseline =
          interpret(complex_ir,
                    ComplexBuffer::from_vector(x, ComplexLayout::Interleaved))
              .to_vector();

      const auto record = [&](const std::vector<cplx> &got) {
        for (int64_t j = 0; j < n; ++j)
          worst = std::max(worst, std::abs(got[j] - baseline[j]));
      };

      for (ComplexLayout layout :
           {ComplexLayout::Interleaved, ComplexLayout::Split}) {
        const LoopProgram lowered = lower_complex(complex_ir, layout);
        const ComplexBuffer in = ComplexBuffer::from_vector(x, layout);
        record(interpret(lowered, in).to_vector());

        const std::vector<LoopProgram> tiled = {
            tile(lowered, TilePolicy::exact(3)),
            tile(lowered, TilePolicy::cache(32 * 1024))};
        for (const LoopProgram &t : tiled)
          record(interpret(t, in).to_vector());

        for (VecPosition pos : {VecPosition::Inner, VecPosition::Outer}) {
          for (bool opt : {false, true}) {
            if (opt && layout == ComplexLayout::Split)
              continue;
            const VectorizeOptions vopts{8, pos, opt};
            const LoopProgram vec = vectorize(lowered, vopts);
            record(interpret(vec, in).to_vector());
            bitwise_ok &= bitwise_equal(interpret(vec, in).data,
                                        interpret(lowered, in).data);
            const LoopProgram tiled_vec = vectorize(tiled[0], vopts);
            record(interpret(tiled_vec, in).to_vector());
            bitwise_ok &= bitwise_equal(interpret(tiled_vec, in).data,
                                        interpret(tiled[0], in).data);
          }
        }
      }
    }
  }
  std::ostringstream detail;
  detail << "worst pass deviation " << worst << ", vector-vs-scalar bitwise "
         << (bitwise_ok ? "equal" : "UNEQUAL");
  report(4, "transforms preserve interpretation", worst < 1e-12 && bitwise_ok,
         detail.str());
}

// 5. Radix-2 pipelines stay Theta(N log N): doubling 1024 -> 2048 grows the
//    flop count by at most 2.5x.
void criterion_sparsity() {
  const int64_t f1024 = pipeline_flops(fuse(*plan_cooley_tukey(1024, 2)).ops);
  const int64_t f2048 = pipeline_flops(fuse(*plan_cooley_tukey(2048, 2)).ops);
  const double ratio = static_cast<double>(f2048) / static_cast<double>(f1024);
  std::ostringstream detail;
  detail << "flops(2048)/flops(1024) = " << ratio;
  report(5, "sparsified flop growth <= 2.5x per doubling", ratio <= 2.5,
         detail.str());
}

// 6. Interleaved layout + interleaved_opt: no strided vector loads remain and
//    every deinterleaved load pair comes with shuffles.
void criterion_interleaved_structure() {
  bool ok = true;
  std::ostringstream detail;
  for (int64_t n : {16, 64, 256, 1024}) {
    for (Algorithm alg : {Algorithm::CooleyTukey, Algorithm::Stockham}) {
      for (VecMode mode : {VecMode::Inner, VecMode::Outer}) {
        PipelineConfig config;
        config.n = n;
        config.algorithm = alg;
        config.vec = mode;
        config.interleaved_opt = true;
        const LoopProgram prog = compile_pipeline(config).final_ir;
        int strided_loads = 0;
        bool shuffles_ok = true;
        for (const LoopNest &nest : prog.nests) {
          int vloads = 0, shuffles = 0;
          for (const Stmt &s : nest.body) {
            if (const auto *vl = std::get_if<VLoad>(&s)) {
              ++vloads;
              strided_loads += vl->lane_stride != 0 && vl->lane_stride != 1;
            }
            shuffles += std::holds_alternative<VShuffle>(s);
          }
          if (vloads > 0 && shuffles < vloads / 2)
            shuffles_ok = false;
        }
        if (strided_loads != 0 || !shuffles_ok) {
          ok = false;
          detail << " n=" << n << " " << algorithm_name(alg) << "/"
                 << (mode == VecMode::Inner ? "inner" : "outer") << ": "
                 << strided_loads << " strided loads";
        }
      }
    }
  }
  if (ok)
    detail << "no strided vector loads; >=1 shuffle per load pair";
  report(6, "interleaved access becomes shuffles", ok, detail.str());
}

// 7. Kernel extraction: simulation equals interpretation bitwise and
//    grid*block conserves every nest's iteration count, N <= 1024.
void criterion_gpu_mapping() {
  bool ok = true;
  std::ostringstream detail;
  for (int64_t n = 2; n <= 1024; n *= 2) {
    for (Algorithm alg : {Algorithm::CooleyTukey, Algorithm::Stockham}) {
      for (int64_t radix : radices_for(n)) {
        PipelineConfig config;
        config.n = n;
        config.algorithm = alg;
        config.radix = radix;
        const CompiledPipeline compiled = compile_pipeline(config);
        const auto x = seeded_input(n, 700 + n);

        for (const LoopProgram *prog :
             {&compiled.complex_ir, &compiled.final_ir}) {
          const ComplexLayout layout =
              prog->layout ? *prog->layout : ComplexLayout::Interleaved;
          const ComplexBuffer in = ComplexBuffer::from_vector(x, layout);
          const auto kernels = extract_kernels(*prog);
          if (kernels.size() != prog->nests.size())
            ok = false;
          for (size_t i = 0; i < kernels.size(); ++i) {
            int64_t nest_iters = 1;
            for (const Loop &l : prog->nests[i].loops)
              nest_iters *= loop_trip_count(l);
            int64_t kernel_iters = 1;
            for (int64_t g : kernels[i].grid_dims)
              kernel_iters *= g;
            for (int64_t b : kernels[i].block_dims)
              kernel_iters *= b;
            if (kernel_iters != nest_iters) {
              ok = false;
              detail << " iteration mismatch n=" << n;
            }
          }
          if (!bitwise_equal(simulate_kernels(*prog, kernels, in).data,
                             interpret(*prog, in).data)) {
            ok = false;
            detail << " sim mismatch n=" << n << " "
                   << algorithm_name(alg);
          }
        }
      }
    }
  }
  if (ok)
    detail << "simulation bitwise-equal, grid*block conserved";
  report(7, "gpu kernel mapping", ok, detail.str());
}

// 8. The bench harness emits a well-formed CSV whose mflops column recomputes
//    exactly as 5 N log2 N / mean_seconds / 1e6.
void criterion_bench_csv() {
  const std::string path = "/tmp/fftgen_acceptance_bench.csv";
  run_cli("bench --sizes 16..4096 --repeats 3 --csv " + path);
  std::ifstream csv(path);
  bool ok = csv.good();
  std::string line;
  if (ok) {
    std::getline(csv, line);
    ok = line == bench_csv_header();
  }
  int rows = 0;
  double worst_rel = 0.0;
  int64_t prev_n = 0;
  while (ok && std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ','))
      fields.push_back(field);
    if (fields.size() != 9) {
      ok = false;
      break;
    }
    const int64_t n = std::stoll(fields[0]);
    if (n < prev_n)
      ok = false; // sizes must be nondecreasing
    prev_n = n;
    const double mean_seconds = std::strtod(fields[6].c_str(), nullptr);
    const double reported = std::strtod(fields[7].c_str(), nullptr);
    const double recomputed = mflops(n, mean_seconds);
    worst_rel = std::max(worst_rel,
                         std::abs(reported - recomputed) /
                             std::max(1.0, std::abs(recomputed)));
    ++rows;
  }
  ok = ok && rows == 9 && worst_rel < 1e-5;
  std::ostringstream detail;
  detail << rows << " rows, worst mflops recomputation error " << worst_rel;
  report(8, "benchmark CSV well-formed and self-consistent", ok, detail.str());
}

// 9. Every --emit output is byte-identical across two CLI invocations.
void criterion_golden_stability() {
  bool ok = true;
  std::ostringstream detail;
  for (const std::string emit : {"ir", "loops", "kernels", "c"}) {
    std::string args = "compile --size 64 --algorithm stockham --radix 4 ";
    if (emit != "c")
      args += "--vectorize inner --interleaved-opt ";
    args += "--emit " + emit;
    const std::string a = run_cli(args);
    const std::string b = run_cli(args);
    if (a.empty() || a != b) {
      ok = false;
      detail << " --emit " << emit << " unstable";
    }
  }
  if (ok)
    detail << "ir/loops/kernels/c byte-identical across runs";
  report(9, "emit outputs are byte-stable", ok, detail.str());
}

} // namespace

int main() {
  criterion_error_bound();
  criterion_formula_oracle();
  criterion_fusion_preservation();
  criterion_transform_invariance();
  criterion_sparsity();
  criterion_interleaved_structure();
  criterion_gpu_mapping();
  criterion_bench_csv();
  criterion_golden_stability();
  if (failures == 0)
    std::printf("all 9 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
