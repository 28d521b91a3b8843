// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Sparse fusion: pattern-match the formula tree into a flat sequence of fused
// sparse operators, so no Kronecker structure is ever materialized densely.

#ifndef FFTGEN_REWRITE_HPP
#define FFTGEN_REWRITE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fftgen/formula.hpp"
#include "fftgen/matrix.hpp"

namespace fftgen {

/// (A_m (x) I_n) * X: kernel applied across n interleaved stride-n slices.
struct FusedMkiv {
  ComplexMatrix kernel; // m x m
  int64_t copies;       // n
};

/// (I_m (x) A_n) * X: kernel applied to m contiguous blocks.
struct FusedIkmv {
  ComplexMatrix kernel; // n x n
  int64_t copies;       // m
};

/// (Pi^{perm_total}_{perm_m} (x) I_{block_k}) * X: block-granular permutation.
struct FusedPkiv {
  int64_t perm_m;
  int64_t perm_total;
  int64_t block_k;
};

/// D * X with the diagonal's coefficients precomputed at fuse time.
struct TwiddleMul {
  std::vector<cplx> coeffs; // length = pipeline size, all unit modulus
};

/// Pi^{perm_total}_{perm_m} * X.
struct Permute {
  int64_t perm_m;
  int64_t perm_total;
};

/// Dense fallback for formulas outside the pattern set. Testing only; never
/// produced for planner output.
struct DenseApply {
  ComplexMatrix matrix;
};

using FusedOp =
    std::variant<FusedMkiv, FusedIkmv, FusedPkiv, TwiddleMul, Permute, DenseApply>;

int64_t op_dim(const FusedOp &op);

struct FuseOptions {
  int64_t kernel_cap = 64; // largest DFT leaf allowed as a dense kernel
  int64_t dense_cap = 256; // largest DenseApply fallback
};

struct FuseResult {
  std::vector<FusedOp> ops; // application order, first-applied first
  std::vector<std::string> diagnostics; // one entry per dense fallback
};

/// Rewrites a well-dimensioned formula into fused operators whose sequential
/// application equals materialize(f). Unmatched subtrees fall back to
/// DenseApply with a diagnostic.
FuseResult fuse(const FormulaExpr &f, const FuseOptions &opts = {});

/// Applies one fused operator out of place.
std::vector<cplx> apply_op(const FusedOp &op, const std::vector<cplx> &x);

/// Applies a whole pipeline in order.
std::vector<cplx> apply_pipeline(std::span<const FusedOp> ops,
                                 std::vector<cplx> x);

/// Real floating-point operations of the pipeline: complex multiply counts 6,
/// complex add 2, data movement 0.
int64_t pipeline_flops(std::span<const FusedOp> ops);

/// One operator per line, stable format (used by --emit ir and golden tests).
std::string print_pipeline(std::span<const FusedOp> ops);

} // namespace fftgen

#endif // FFTGEN_REWRITE_HPP
