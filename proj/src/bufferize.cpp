// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// One loop nest per fused operator, reading the previous stage's buffer and
// writing the other main buffer (ping-pong), so no nest has a loop-carried
// dependence and every loop is parallel.

#include "fftgen/loopir.hpp"

namespace fftgen {

namespace {

struct Builder {
  LoopProgram prog;

  int32_t new_var() { return prog.next_var++; }

  int32_t add_coeff_buffer(std::vector<cplx> coeffs) {
    BufferDecl decl;
    decl.name = "t" + std::to_string(prog.buffers.size() - 2);
    decl.kind = BufKind::Coeff;
    decl.len = static_cast<int64_t>(coeffs.size());
    decl.coeff = std::move(coeffs);
    prog.buffers.push_back(std::move(decl));
    return static_cast<int32_t>(prog.buffers.size() - 1);
  }

  void add_nest(LoopNest nest, std::string label, int32_t in_buf,
                int32_t out_buf) {
    nest.label = std::move(label);
    nest.in_buf = in_buf;
    nest.out_buf = out_buf;
    prog.nests.push_back(std::move(nest));
  }
};

} // namespace

LoopProgram bufferize(std::span<const FusedOp> ops, int64_t n) {
  Builder b;
  b.prog.n = n;
  b.prog.buffers.push_back(BufferDecl{"b0", BufKind::Main, n, {}});
  b.prog.buffers.push_back(BufferDecl{"b1", BufKind::Main, n, {}});
  b.prog.in_buf = 0;

  int32_t cur = 0;
  for (const FusedOp &op : ops) {
    if (op_dim(op) != n)
      throw LowerError("fused operator dimension " + std::to_string(op_dim(op)) +
                       " does not match pipeline size " + std::to_string(n));
    const int32_t in = cur;
    const int32_t out = 1 - cur;

    if (const auto *mk = std::get_if<FusedMkiv>(&op)) {
      // for i in [0, copies): Y[i : copies : m] = A * X[i : copies : m]
      const int64_t m = mk->kernel.rows;
      LoopNest nest;
      const int32_t i = b.new_var();
      nest.loops.push_back(Loop{i, 0, mk->copies, 1, true, {}, {}});
      Slice s{AffineExpr::var(i), mk->copies, m};
      nest.body.push_back(CMatVec{mk->kernel, BufSlice{in, s}, BufSlice{out, s}});
      b.add_nest(std::move(nest), "FusedMKIV", in, out);
    } else if (const auto *ik = std::get_if<FusedIkmv>(&op)) {
      // for i in [0, copies): Y[i*n : 1 : n] = A * X[i*n : 1 : n]
      const int64_t block = ik->kernel.rows;
      LoopNest nest;
      const int32_t i = b.new_var();
      nest.loops.push_back(Loop{i, 0, ik->copies, 1, true, {}, {}});
      Slice s{AffineExpr::var(i, block), 1, block};
      nest.body.push_back(CMatVec{ik->kernel, BufSlice{in, s}, BufSlice{out, s}});
      b.add_nest(std::move(nest), "FusedIKMV", in, out);
    } else if (const auto *pk = std::get_if<FusedPkiv>(&op)) {
      // Doubly nested copy of k-element contiguous blocks.
      const int64_t p = pk->perm_m;
      const int64_t cols = pk->perm_total / p;
      const int64_t k = pk->block_k;
      LoopNest nest;
      const int32_t i = b.new_var();
      const int32_t j = b.new_var();
      nest.loops.push_back(Loop{i, 0, p, 1, true, {}, {}});
      nest.loops.push_back(Loop{j, 0, cols, 1, true, {}, {}});
      Slice src{(AffineExpr::var(j, p) + AffineExpr::var(i)) * k, 1, k};
      Slice dst{(AffineExpr::var(i, cols) + AffineExpr::var(j)) * k, 1, k};
      nest.body.push_back(CCopy{BufSlice{in, src}, BufSlice{out, dst}});
      b.add_nest(std::move(nest), "FusedPKIV", in, out);
    } else if (const auto *tw = std::get_if<TwiddleMul>(&op)) {
      // Pointwise multiply against the precomputed coefficient table.
      const int32_t coeff_buf = b.add_coeff_buffer(tw->coeffs);
      LoopNest nest;
      const int32_t i = b.new_var();
      nest.loops.push_back(Loop{i, 0, n, 1, true, {}, {}});
      Slice s{AffineExpr::var(i), 1, 1};
      nest.body.push_back(CPointMul{BufSlice{coeff_buf, s}, BufSlice{in, s},
                                    BufSlice{out, s}});
      b.add_nest(std::move(nest), "TwiddleMul", in, out);
    } else if (const auto *pe = std::get_if<Permute>(&op)) {
      // Doubly nested single-element copy.
      const int64_t p = pe->perm_m;
      const int64_t cols = pe->perm_total / p;
      LoopNest nest;
      const int32_t i = b.new_var();
      const int32_t j = b.new_var();
      nest.loops.push_back(Loop{i, 0, p, 1, true, {}, {}});
      nest.loops.push_back(Loop{j, 0, cols, 1, true, {}, {}});
      Slice src{AffineExpr::var(j, p) + AffineExpr::var(i), 1, 1};
      Slice dst{AffineExpr::var(i, cols) + AffineExpr::var(j), 1, 1};
      nest.body.push_back(CCopy{BufSlice{in, src}, BufSlice{out, dst}});
      b.add_nest(std::move(nest), "Permute", in, out);
    } else {
      const auto &da = std::get<DenseApply>(op);
      LoopNest nest;
      const int32_t i = b.new_var();
      nest.loops.push_back(Loop{i, 0, 1, 1, true, {}, {}});
      Slice s{AffineExpr::var(i, n), 1, n};
      nest.body.push_back(CMatVec{da.matrix, BufSlice{in, s}, BufSlice{out, s}});
      b.add_nest(std::move(nest), "DenseApply", in, out);
    }
    cur = 1 - cur;
  }
  b.prog.out_buf = cur;
  return std::move(b.prog);
}

} // namespace fftgen
