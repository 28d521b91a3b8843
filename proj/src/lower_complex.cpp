// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Rewrites complex-valued statements into scalar float loads, stores and
// arithmetic. A complex value j maps to float indices (2j, 2j+1) under the
// interleaved layout and (j, N+j) under split. Complex multiplication becomes
// (a+bi)(c+di) = (ac-bd) + (ad+bc)i; kernel entries that are exactly 0, +-1
// or +-i lose their multiplies, the way unrolled butterfly codelets do.

#include "fftgen/loopir.hpp"

#include <cassert>

namespace fftgen {

namespace {

class Lowerer {
public:
  Lowerer(const LoopProgram &prog, ComplexLayout layout)
      : prog_(prog), layout_(layout) {}

  LoopProgram run() {
    LoopProgram out = prog_;
    out.layout = layout_;
    for (LoopNest &nest : out.nests) {
      body_.clear();
      next_reg_ = 0;
      for (const Stmt &s : nest.body)
        lower_stmt(s, out);
      nest.body = body_;
      nest.num_regs = next_reg_;
    }
    return out;
  }

private:
  AffineExpr re_index(int32_t buf, const AffineExpr &complex_idx,
                      const LoopProgram &prog) const {
    if (layout_ == ComplexLayout::Interleaved)
      return complex_idx * 2;
    (void)prog;
    (void)buf;
    return complex_idx;
  }

  AffineExpr im_index(int32_t buf, const AffineExpr &complex_idx,
                      const LoopProgram &prog) const {
    if (layout_ == ComplexLayout::Interleaved)
      return complex_idx * 2 + 1;
    return complex_idx + prog.buffers[buf].len;
  }

  int32_t emit_load(int32_t buf, AffineExpr idx) {
    const int32_t r = next_reg_++;
    body_.push_back(FLoad{r, buf, std::move(idx)});
    return r;
  }

  void emit_store(int32_t buf, AffineExpr idx, Operand v) {
    body_.push_back(FStore{v, buf, std::move(idx)});
  }

  Operand emit_bin(FBin::Op op, Operand a, Operand b) {
    const int32_t r = next_reg_++;
    body_.push_back(FBin{op, r, a, b});
    return Operand::r(r);
  }

  Operand emit_neg(Operand a) {
    return emit_bin(FBin::Sub, Operand::c(0.0), a);
  }

  // One complex term of a kernel row: coefficient * (xr + i*xi), with the
  // multiplies elided for exact 0 / +-1 / +-i coefficients.
  struct Term {
    bool present = false;
    Operand re;
    Operand im;
  };

  Term kernel_term(cplx a, Operand xr, Operand xi) {
    if (a == cplx{0.0, 0.0})
      return {};
    if (a == cplx{1.0, 0.0})
      return {true, xr, xi};
    if (a == cplx{-1.0, 0.0})
      return {true, emit_neg(xr), emit_neg(xi)};
    if (a == cplx{0.0, -1.0}) // -i * (xr + i*xi) = xi - i*xr
      return {true, xi, emit_neg(xr)};
    if (a == cplx{0.0, 1.0}) // i * (xr + i*xi) = -xi + i*xr
      return {true, emit_neg(xi), xr};
    const Operand ar = Operand::c(a.real());
    const Operand ai = Operand::c(a.imag());
    const Operand t0 = emit_bin(FBin::Mul, ar, xr);
    const Operand t1 = emit_bin(FBin::Mul, ai, xi);
    const Operand re = emit_bin(FBin::Sub, t0, t1);
    const Operand t2 = emit_bin(FBin::Mul, ar, xi);
    const Operand t3 = emit_bin(FBin::Mul, ai, xr);
    const Operand im = emit_bin(FBin::Add, t2, t3);
    return {true, re, im};
  }

  void lower_matvec(const CMatVec &mv, const LoopProgram &prog) {
    const int64_t m = mv.kernel.rows;
    assert(mv.in.slice.count == m && mv.out.slice.count == m);
    std::vector<Operand> xr(m), xi(m);
    for (int64_t k = 0; k < m; ++k) {
      const AffineExpr idx = mv.in.slice.start + k * mv.in.slice.stride;
      xr[k] = Operand::r(emit_load(mv.in.buf, re_index(mv.in.buf, idx, prog)));
      xi[k] = Operand::r(emit_load(mv.in.buf, im_index(mv.in.buf, idx, prog)));
    }
    for (int64_t r = 0; r < m; ++r) {
      Term acc;
      for (int64_t k = 0; k < m; ++k) {
        const Term t = kernel_term(mv.kernel.at(r, k), xr[k], xi[k]);
        if (!t.present)
          continue;
        if (!acc.present) {
          acc = t;
        } else {
          acc.re = emit_bin(FBin::Add, acc.re, t.re);
          acc.im = emit_bin(FBin::Add, acc.im, t.im);
        }
      }
      if (!acc.present)
        acc = {true, Operand::c(0.0), Operand::c(0.0)};
      const AffineExpr idx = mv.out.slice.start + r * mv.out.slice.stride;
      emit_store(mv.out.buf, re_index(mv.out.buf, idx, prog), acc.re);
      emit_store(mv.out.buf, im_index(mv.out.buf, idx, prog), acc.im);
    }
  }

  void lower_pointmul(const CPointMul &pm, const LoopProgram &prog) {
    const Operand cr = Operand::r(
        emit_load(pm.coeff.buf, re_index(pm.coeff.buf, pm.coeff.slice.start, prog)));
    const Operand ci = Operand::r(
        emit_load(pm.coeff.buf, im_index(pm.coeff.buf, pm.coeff.slice.start, prog)));
    const Operand xr = Operand::r(
        emit_load(pm.in.buf, re_index(pm.in.buf, pm.in.slice.start, prog)));
    const Operand xi = Operand::r(
        emit_load(pm.in.buf, im_index(pm.in.buf, pm.in.slice.start, prog)));
    const Operand t0 = emit_bin(FBin::Mul, cr, xr);
    const Operand t1 = emit_bin(FBin::Mul, ci, xi);
    const Operand yr = emit_bin(FBin::Sub, t0, t1);
    const Operand t2 = emit_bin(FBin::Mul, cr, xi);
    const Operand t3 = emit_bin(FBin::Mul, ci, xr);
    const Operand yi = emit_bin(FBin::Add, t2, t3);
    emit_store(pm.out.buf, re_index(pm.out.buf, pm.out.slice.start, prog), yr);
    emit_store(pm.out.buf, im_index(pm.out.buf, pm.out.slice.start, prog), yi);
  }

  void lower_copy(const CCopy &cp, const LoopProgram &prog) {
    assert(cp.in.slice.stride == 1 && cp.out.slice.stride == 1);
    assert(cp.in.slice.count == cp.out.slice.count);
    const int64_t count = cp.in.slice.count;
    if (count == 1) {
      const Operand re = Operand::r(
          emit_load(cp.in.buf, re_index(cp.in.buf, cp.in.slice.start, prog)));
      const Operand im = Operand::r(
          emit_load(cp.in.buf, im_index(cp.in.buf, cp.in.slice.start, prog)));
      emit_store(cp.out.buf, re_index(cp.out.buf, cp.out.slice.start, prog), re);
      emit_store(cp.out.buf, im_index(cp.out.buf, cp.out.slice.start, prog), im);
      return;
    }
    if (layout_ == ComplexLayout::Interleaved) {
      body_.push_back(FCopy{cp.in.buf, cp.in.slice.start * 2, cp.out.buf,
                            cp.out.slice.start * 2, 2 * count});
    } else {
      body_.push_back(FCopy{cp.in.buf, cp.in.slice.start, cp.out.buf,
                            cp.out.slice.start, count});
      body_.push_back(FCopy{cp.in.buf, cp.in.slice.start + prog.buffers[cp.in.buf].len,
                            cp.out.buf,
                            cp.out.slice.start + prog.buffers[cp.out.buf].len,
                            count});
    }
  }

  void lower_stmt(const Stmt &s, const LoopProgram &prog) {
    if (const auto *mv = std::get_if<CMatVec>(&s))
      lower_matvec(*mv, prog);
    else if (const auto *pm = std::get_if<CPointMul>(&s))
      lower_pointmul(*pm, prog);
    else if (const auto *cp = std::get_if<CCopy>(&s))
      lower_copy(*cp, prog);
    else
      throw LowerError("lower_complex expects complex-typed statements only");
  }

  const LoopProgram &prog_;
  ComplexLayout layout_;
  std::vector<Stmt> body_;
  int32_t next_reg_ = 0;
};

} // namespace

LoopProgram lower_complex(const LoopProgram &prog, ComplexLayout layout) {
  if (prog.layout)
    throw LowerError("program is already lowered to floats");
  return Lowerer(prog, layout).run();
}

} // namespace fftgen
