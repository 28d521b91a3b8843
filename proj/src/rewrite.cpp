// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/rewrite.hpp"

#include <cassert>
#include <sstream>

namespace fftgen {

int64_t op_dim(const FusedOp &op) {
  if (const auto *x = std::get_if<FusedMkiv>(&op))
    return x->kernel.rows * x->copies;
  if (const auto *x = std::get_if<FusedIkmv>(&op))
    return x->kernel.rows * x->copies;
  if (const auto *x = std::get_if<FusedPkiv>(&op))
    return x->perm_total * x->block_k;
  if (const auto *x = std::get_if<TwiddleMul>(&op))
    return static_cast<int64_t>(x->coeffs.size());
  if (const auto *x = std::get_if<Permute>(&op))
    return x->perm_total;
  return std::get<DenseApply>(op).matrix.rows;
}

namespace {

std::vector<cplx> tile_coeffs(const std::vector<cplx> &coeffs, int64_t times) {
  std::vector<cplx> out;
  out.reserve(coeffs.size() * times);
  for (int64_t t = 0; t < times; ++t)
    out.insert(out.end(), coeffs.begin(), coeffs.end());
  return out;
}

std::vector<cplx> repeat_each(const std::vector<cplx> &coeffs, int64_t times) {
  std::vector<cplx> out;
  out.reserve(coeffs.size() * times);
  for (const cplx &c : coeffs)
    out.insert(out.end(), times, c);
  return out;
}

struct Fuser {
  const FuseOptions &opts;
  int64_t pipeline_n;
  std::vector<FusedOp> ops;
  std::vector<std::string> diagnostics;

  void check_kernel_cap(int64_t size) {
    if (size > opts.kernel_cap)
      throw FuseError("DFT kernel of size " + std::to_string(size) +
                      " exceeds the kernel cap " +
                      std::to_string(opts.kernel_cap) +
                      "; plan it into smaller factors first");
  }

  // Emits I_copies (x) B where B is expressible as (core (x) I_block) and
  // core itself maps to a single fused op. Uses the commutation
  //   I_C (x) B = Pi^N_C * (B (x) I_C) * Pi^N_M,  N = C*M, M = dim(B),
  // so the lifted operator stays one of the sparse forms and the two stride
  // permutations are pure data movement.
  void emit_lifted(int64_t copies, int64_t b_dim, FusedOp lifted) {
    if (copies == 1) {
      ops.push_back(std::move(lifted));
      return;
    }
    const int64_t n = copies * b_dim;
    assert(n == pipeline_n);
    ops.push_back(Permute{b_dim, n});
    ops.push_back(std::move(lifted));
    ops.push_back(Permute{copies, n});
  }

  void dense_fallback(const FormulaExpr &f, int64_t copies) {
    const int64_t dim = copies * f.dim();
    if (dim > opts.dense_cap)
      throw FuseError("dense fallback of dimension " + std::to_string(dim) +
                      " exceeds the cap " + std::to_string(opts.dense_cap));
    std::ostringstream diag;
    diag << "no sparse pattern for '" << print_formula(f) << "'";
    if (copies > 1)
      diag << " under I " << copies;
    diag << "; falling back to a dense apply";
    diagnostics.push_back(diag.str());
    ComplexMatrix m = materialize(f, opts.dense_cap);
    if (copies > 1)
      m = kron(identity_matrix(copies), m);
    ops.push_back(DenseApply{std::move(m)});
  }

  // Emits the operators for I_copies (x) f, in application order.
  void walk(const FormulaExpr &f, int64_t copies) {
    if (formula_cast<Identity>(f) != nullptr)
      return;
    if (const auto *d = formula_cast<Dft>(f)) {
      if (d->size == 1)
        return;
      check_kernel_cap(d->size);
      ops.push_back(FusedIkmv{dft_matrix(d->size), copies});
      return;
    }
    if (const auto *t = formula_cast<TwiddleDiag>(f)) {
      ops.push_back(
          TwiddleMul{tile_coeffs(twiddle_coefficients(t->total, t->block), copies)});
      return;
    }
    if (const auto *p = formula_cast<StridePermute>(f)) {
      if (p->stride == 1 || p->stride == p->total)
        return;
      if (copies == 1)
        ops.push_back(Permute{p->stride, p->total});
      else
        emit_lifted(copies, p->total, FusedPkiv{p->stride, p->total, copies});
      return;
    }
    if (const auto *c = formula_cast<Compose>(f)) {
      // Factors apply right-to-left; the copy count distributes through:
      // I_m (x) (P . Q) = (I_m (x) P) . (I_m (x) Q).
      for (auto it = c->factors.rbegin(); it != c->factors.rend(); ++it)
        walk(**it, copies);
      return;
    }
    const auto *k = formula_cast<Kronecker>(f);
    assert(k != nullptr);
    if (const auto *lid = formula_cast<Identity>(*k->left)) {
      walk(*k->right, copies * lid->size);
      return;
    }
    if (const auto *rid = formula_cast<Identity>(*k->right)) {
      const int64_t block = rid->size;
      if (block == 1) {
        walk(*k->left, copies);
        return;
      }
      const FormulaExpr &core = *k->left;
      if (const auto *nested = formula_cast<Kronecker>(core)) {
        // (a (x) I_b) (x) I_n = a (x) I_{b*n}
        if (const auto *nid = formula_cast<Identity>(*nested->right)) {
          walk(*kronecker(nested->left, identity(nid->size * block)), copies);
          return;
        }
      }
      if (const auto *d = formula_cast<Dft>(core)) {
        if (d->size == 1)
          return;
        check_kernel_cap(d->size);
        emit_lifted(copies, core.dim() * block,
                    FusedMkiv{dft_matrix(d->size), block * copies});
        return;
      }
      if (const auto *t = formula_cast<TwiddleDiag>(core)) {
        // (D (x) I_n) is still diagonal: each coefficient repeats n times.
        ops.push_back(TwiddleMul{tile_coeffs(
            repeat_each(twiddle_coefficients(t->total, t->block), block),
            copies)});
        return;
      }
      if (const auto *p = formula_cast<StridePermute>(core)) {
        if (p->stride == 1 || p->stride == p->total)
          return;
        emit_lifted(copies, core.dim() * block,
                    FusedPkiv{p->stride, p->total, block * copies});
        return;
      }
    }
    dense_fallback(f, copies);
  }
};

} // namespace

FuseResult fuse(const FormulaExpr &f, const FuseOptions &opts) {
  Fuser fuser{opts, f.dim(), {}, {}};
  fuser.walk(f, 1);
  for (const FusedOp &op : fuser.ops)
    if (op_dim(op) != f.dim())
      throw FuseError("internal error: fused operator dimension " +
                      std::to_string(op_dim(op)) + " != pipeline size " +
                      std::to_string(f.dim()));
  return FuseResult{std::move(fuser.ops), std::move(fuser.diagnostics)};
}

std::vector<cplx> apply_op(const FusedOp &op, const std::vector<cplx> &x) {
  const int64_t n = static_cast<int64_t>(x.size());
  if (op_dim(op) != n)
    throw DimensionError("operator dimension " + std::to_string(op_dim(op)) +
                         " does not match vector length " + std::to_string(n));
  std::vector<cplx> y(n);
  if (const auto *mk = std::get_if<FusedMkiv>(&op)) {
    const int64_t m = mk->kernel.rows;
    const int64_t copies = mk->copies;
    std::vector<cplx> slice(m);
    for (int64_t i = 0; i < copies; ++i) {
      for (int64_t j = 0; j < m; ++j)
        slice[j] = x[i + j * copies];
      const auto out = matvec(mk->kernel, slice);
      for (int64_t j = 0; j < m; ++j)
        y[i + j * copies] = out[j];
    }
    return y;
  }
  if (const auto *ik = std::get_if<FusedIkmv>(&op)) {
    const int64_t block = ik->kernel.rows;
    std::vector<cplx> slice(block);
    for (int64_t i = 0; i < ik->copies; ++i) {
      for (int64_t j = 0; j < block; ++j)
        slice[j] = x[i * block + j];
      const auto out = matvec(ik->kernel, slice);
      for (int64_t j = 0; j < block; ++j)
        y[i * block + j] = out[j];
    }
    return y;
  }
  if (const auto *pk = std::get_if<FusedPkiv>(&op)) {
    const int64_t p = pk->perm_m;
    const int64_t cols = pk->perm_total / p;
    const int64_t k = pk->block_k;
    for (int64_t i = 0; i < p; ++i)
      for (int64_t j = 0; j < cols; ++j)
        for (int64_t c = 0; c < k; ++c)
          y[k * (i * cols + j) + c] = x[k * (j * p + i) + c];
    return y;
  }
  if (const auto *tw = std::get_if<TwiddleMul>(&op)) {
    for (int64_t i = 0; i < n; ++i)
      y[i] = tw->coeffs[i] * x[i];
    return y;
  }
  if (const auto *pe = std::get_if<Permute>(&op)) {
    const int64_t p = pe->perm_m;
    const int64_t cols = pe->perm_total / p;
    for (int64_t i = 0; i < p; ++i)
      for (int64_t j = 0; j < cols; ++j)
        y[i * cols + j] = x[j * p + i];
    return y;
  }
  return matvec(std::get<DenseApply>(op).matrix, x);
}

std::vector<cplx> apply_pipeline(std::span<const FusedOp> ops,
                                 std::vector<cplx> x) {
  for (const FusedOp &op : ops)
    x = apply_op(op, x);
  return x;
}

namespace {

int64_t matvec_flops(int64_t rows) {
  // Dense rows x rows complex mat-vec: rows^2 multiplies, rows*(rows-1) adds.
  return 6 * rows * rows + 2 * rows * (rows - 1);
}

} // namespace

int64_t pipeline_flops(std::span<const FusedOp> ops) {
  int64_t total = 0;
  for (const FusedOp &op : ops) {
    if (const auto *mk = std::get_if<FusedMkiv>(&op))
      total += mk->copies * matvec_flops(mk->kernel.rows);
    else if (const auto *ik = std::get_if<FusedIkmv>(&op))
      total += ik->copies * matvec_flops(ik->kernel.rows);
    else if (const auto *tw = std::get_if<TwiddleMul>(&op))
      total += 6 * static_cast<int64_t>(tw->coeffs.size());
    else if (const auto *da = std::get_if<DenseApply>(&op))
      total += matvec_flops(da->matrix.rows);
    // FusedPkiv and Permute are pure data movement.
  }
  return total;
}

std::string print_pipeline(std::span<const FusedOp> ops) {
  std::ostringstream out;
  for (const FusedOp &op : ops) {
    if (const auto *mk = std::get_if<FusedMkiv>(&op))
      out << "FusedMKIV(m=" << mk->kernel.rows << ", copies=" << mk->copies
          << ")\n";
    else if (const auto *ik = std::get_if<FusedIkmv>(&op))
      out << "FusedIKMV(n=" << ik->kernel.rows << ", copies=" << ik->copies
          << ")\n";
    else if (const auto *pk = std::get_if<FusedPkiv>(&op))
      out << "FusedPKIV(m=" << pk->perm_m << ", total=" << pk->perm_total
          << ", k=" << pk->block_k << ")\n";
    else if (const auto *tw = std::get_if<TwiddleMul>(&op))
      out << "TwiddleMul(len=" << tw->coeffs.size() << ")\n";
    else if (const auto *pe = std::get_if<Permute>(&op))
      out << "Permute(m=" << pe->perm_m << ", total=" << pe->perm_total
          << ")\n";
    else
      out << "DenseApply(dim=" << std::get<DenseApply>(op).matrix.rows << ")\n";
  }
  return out.str();
}

} // namespace fftgen
