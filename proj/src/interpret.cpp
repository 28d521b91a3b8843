// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/exec.hpp"

#include <cassert>
#include <thread>

#include "machine.hpp"

namespace fftgen {
namespace detail {

namespace {

// Complex-typed programs store buffers in canonical interleaved form; the
// declared program layout only exists after lowering.
bool complex_mode(const LoopProgram &prog) { return !prog.layout.has_value(); }

} // namespace

Machine::Machine(const LoopProgram &prog) : prog_(prog) {
  bufs_.resize(prog.buffers.size());
  for (size_t i = 0; i < prog.buffers.size(); ++i) {
    const BufferDecl &decl = prog.buffers[i];
    bufs_[i].assign(2 * decl.len, 0.0);
    if (decl.kind == BufKind::Coeff) {
      if (complex_mode(prog_) || *prog_.layout == ComplexLayout::Interleaved) {
        for (int64_t j = 0; j < decl.len; ++j) {
          bufs_[i][2 * j] = decl.coeff[j].real();
          bufs_[i][2 * j + 1] = decl.coeff[j].imag();
        }
      } else {
        for (int64_t j = 0; j < decl.len; ++j) {
          bufs_[i][j] = decl.coeff[j].real();
          bufs_[i][decl.len + j] = decl.coeff[j].imag();
        }
      }
    }
  }
}

void Machine::load_input(const ComplexBuffer &input) {
  if (input.logical_len != prog_.n)
    throw ExecError("input length " + std::to_string(input.logical_len) +
                    " does not match pipeline size " + std::to_string(prog_.n));
  std::vector<double> &dst = bufs_[prog_.in_buf];
  if (complex_mode(prog_)) {
    for (int64_t j = 0; j < prog_.n; ++j) {
      const cplx v = input.get(j);
      dst[2 * j] = v.real();
      dst[2 * j + 1] = v.imag();
    }
    return;
  }
  if (input.layout != *prog_.layout)
    throw ExecError("input layout does not match the layout the program was "
                    "lowered for");
  dst = input.data;
}

ComplexBuffer Machine::output() const {
  const std::vector<double> &src = bufs_[prog_.out_buf];
  if (complex_mode(prog_)) {
    ComplexBuffer out = ComplexBuffer::zeros(prog_.n, ComplexLayout::Interleaved);
    out.data = src;
    return out;
  }
  ComplexBuffer out = ComplexBuffer::zeros(prog_.n, *prog_.layout);
  out.data = src;
  return out;
}

void Machine::check(int32_t buf, int64_t idx, int64_t limit) const {
  if (idx < 0 || idx >= limit)
    throw ExecError("out-of-bounds access to " + prog_.buffers[buf].name +
                    " at index " + std::to_string(idx) + " (limit " +
                    std::to_string(limit) + "); aborting");
  if (allowed_ && !(*allowed_)[buf])
    throw ExecError("access to unregistered buffer " + prog_.buffers[buf].name);
}

double Machine::load_float(int32_t buf, int64_t idx) const {
  check(buf, idx, 2 * prog_.buffers[buf].len);
  return bufs_[buf][idx];
}

void Machine::store_float(int32_t buf, int64_t idx, double v) {
  check(buf, idx, 2 * prog_.buffers[buf].len);
  bufs_[buf][idx] = v;
}

cplx Machine::load_complex(int32_t buf, int64_t j) const {
  check(buf, j, prog_.buffers[buf].len);
  return {bufs_[buf][2 * j], bufs_[buf][2 * j + 1]};
}

void Machine::store_complex(int32_t buf, int64_t j, cplx v) {
  check(buf, j, prog_.buffers[buf].len);
  bufs_[buf][2 * j] = v.real();
  bufs_[buf][2 * j + 1] = v.imag();
}

void Machine::exec_stmt(Frame &f, const Stmt &s) {
  if (const auto *mv = std::get_if<CMatVec>(&s)) {
    const int64_t m = mv->kernel.rows;
    const int64_t in0 = mv->in.slice.start.eval(f.env);
    const int64_t out0 = mv->out.slice.start.eval(f.env);
    cplx x[64];
    assert(m <= 64);
    for (int64_t k = 0; k < m; ++k)
      x[k] = load_complex(mv->in.buf, in0 + k * mv->in.slice.stride);
    for (int64_t r = 0; r < m; ++r) {
      double acc_re = 0.0, acc_im = 0.0;
      for (int64_t k = 0; k < m; ++k) {
        const cplx a = mv->kernel.at(r, k);
        acc_re += a.real() * x[k].real() - a.imag() * x[k].imag();
        acc_im += a.real() * x[k].imag() + a.imag() * x[k].real();
      }
      store_complex(mv->out.buf, out0 + r * mv->out.slice.stride,
                    {acc_re, acc_im});
    }
  } else if (const auto *pm = std::get_if<CPointMul>(&s)) {
    const cplx c = load_complex(pm->coeff.buf, pm->coeff.slice.start.eval(f.env));
    const cplx x = load_complex(pm->in.buf, pm->in.slice.start.eval(f.env));
    store_complex(pm->out.buf, pm->out.slice.start.eval(f.env),
                  {c.real() * x.real() - c.imag() * x.imag(),
                   c.real() * x.imag() + c.imag() * x.real()});
  } else if (const auto *cp = std::get_if<CCopy>(&s)) {
    const int64_t in0 = cp->in.slice.start.eval(f.env);
    const int64_t out0 = cp->out.slice.start.eval(f.env);
    for (int64_t k = 0; k < cp->in.slice.count; ++k)
      store_complex(cp->out.buf, out0 + k, load_complex(cp->in.buf, in0 + k));
  } else if (const auto *ld = std::get_if<FLoad>(&s)) {
    f.regs[ld->dst * f.lanes] = load_float(ld->buf, ld->idx.eval(f.env));
  } else if (const auto *st = std::get_if<FStore>(&s)) {
    const double v = st->src.kind == Operand::Reg
                         ? f.regs[st->src.reg * f.lanes]
                         : st->src.imm;
    store_float(st->buf, st->idx.eval(f.env), v);
  } else if (const auto *bin = std::get_if<FBin>(&s)) {
    for (int64_t l = 0; l < f.lanes; ++l) {
      const double a = bin->a.kind == Operand::Reg
                           ? f.regs[bin->a.reg * f.lanes + l]
                           : bin->a.imm;
      const double b = bin->b.kind == Operand::Reg
                           ? f.regs[bin->b.reg * f.lanes + l]
                           : bin->b.imm;
      double r = 0.0;
      switch (bin->op) {
      case FBin::Add:
        r = a + b;
        break;
      case FBin::Sub:
        r = a - b;
        break;
      case FBin::Mul:
        r = a * b;
        break;
      }
      f.regs[bin->dst * f.lanes + l] = r;
    }
  } else if (const auto *fc = std::get_if<FCopy>(&s)) {
    const int64_t in0 = fc->in_idx.eval(f.env);
    const int64_t out0 = fc->out_idx.eval(f.env);
    for (int64_t k = 0; k < fc->count; ++k)
      store_float(fc->out_buf, out0 + k, load_float(fc->in_buf, in0 + k));
  } else if (const auto *vl = std::get_if<VLoad>(&s)) {
    const int64_t base = vl->idx.eval(f.env);
    for (int64_t l = 0; l < f.lanes; ++l)
      f.regs[vl->dst * f.lanes + l] =
          load_float(vl->buf, base + l * vl->lane_stride);
  } else if (const auto *vs = std::get_if<VStore>(&s)) {
    const int64_t base = vs->idx.eval(f.env);
    for (int64_t l = 0; l < f.lanes; ++l) {
      const double v = vs->src.kind == Operand::Reg
                           ? f.regs[vs->src.reg * f.lanes + l]
                           : vs->src.imm;
      store_float(vs->buf, base + l * vs->lane_stride, v);
    }
  } else {
    const auto &sh = std::get<VShuffle>(s);
    // Read both sources before writing: dst may alias a or b.
    double tmp[64];
    assert(f.lanes <= 64);
    for (int64_t l = 0; l < f.lanes; ++l) {
      const int32_t p = sh.pattern[l];
      tmp[l] = p < f.lanes ? f.regs[sh.a * f.lanes + p]
                           : f.regs[sh.b * f.lanes + (p - f.lanes)];
    }
    for (int64_t l = 0; l < f.lanes; ++l)
      f.regs[sh.dst * f.lanes + l] = tmp[l];
  }
}

void Machine::exec_body(Frame &frame, std::span<const Stmt> body,
                        const std::vector<char> *allowed) {
  allowed_ = allowed;
  for (const Stmt &s : body)
    exec_stmt(frame, s);
  allowed_ = nullptr;
}

void Machine::loop_rec(Frame &frame, const LoopNest &nest, size_t level) {
  if (level == nest.loops.size()) {
    for (const Stmt &s : nest.body)
      exec_stmt(frame, s);
    return;
  }
  const Loop &l = nest.loops[level];
  const int64_t lanes_before = frame.lanes;
  if (l.vec && l.vec->width > 1) {
    frame.lanes = l.vec->width;
    frame.regs.assign(static_cast<size_t>(nest.num_regs) * frame.lanes, 0.0);
  }
  for (int64_t iv = l.lower; iv < l.upper; iv += l.step) {
    frame.env[l.var] = iv;
    loop_rec(frame, nest, level + 1);
  }
  frame.lanes = lanes_before;
}

void Machine::run_nest(const LoopNest &nest, int threads) {
  Frame frame;
  frame.env.assign(prog_.next_var, 0);
  frame.regs.assign(static_cast<size_t>(nest.num_regs), 0.0);
  frame.lanes = 1;

  const bool can_split = threads > 1 && !nest.loops.empty() &&
                         nest.loops.front().parallel &&
                         loop_trip_count(nest.loops.front()) >= threads;
  if (!can_split) {
    loop_rec(frame, nest, 0);
    return;
  }

  // Iterations of a parallel loop write disjoint slices, so a plain range
  // split needs no synchronization beyond the join.
  const Loop &outer = nest.loops.front();
  const int64_t trip = loop_trip_count(outer);
  const int64_t chunk = (trip + threads - 1) / threads;
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t) {
    const int64_t first = t * chunk;
    const int64_t last = std::min(trip, first + chunk);
    if (first >= last)
      break;
    workers.emplace_back([this, &nest, first, last]() {
      LoopNest local = nest;
      local.loops.front().lower = nest.loops.front().lower +
                                  first * nest.loops.front().step;
      local.loops.front().upper = nest.loops.front().lower +
                                  last * nest.loops.front().step;
      Frame frame;
      frame.env.assign(prog_.next_var, 0);
      frame.regs.assign(static_cast<size_t>(nest.num_regs), 0.0);
      frame.lanes = 1;
      loop_rec(frame, local, 0);
    });
  }
  for (std::thread &w : workers)
    w.join();
}

void Machine::run(int threads) {
  for (const LoopNest &nest : prog_.nests)
    run_nest(nest, threads);
}

} // namespace detail

ComplexBuffer interpret(const LoopProgram &prog, const ComplexBuffer &input,
                        const ExecOptions &opts) {
  detail::Machine machine(prog);
  machine.load_input(input);
  machine.run(opts.threads);
  return machine.output();
}

} // namespace fftgen
