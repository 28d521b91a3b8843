// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/loopir.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <sstream>

namespace fftgen {

AffineExpr AffineExpr::var(int32_t v, int64_t coeff) {
  AffineExpr e;
  if (coeff != 0)
    e.terms.emplace_back(v, coeff);
  return e;
}

AffineExpr AffineExpr::operator+(const AffineExpr &o) const {
  AffineExpr out;
  out.constant = constant + o.constant;
  size_t i = 0, j = 0;
  while (i < terms.size() || j < o.terms.size()) {
    if (j == o.terms.size() ||
        (i < terms.size() && terms[i].first < o.terms[j].first)) {
      out.terms.push_back(terms[i++]);
    } else if (i == terms.size() || o.terms[j].first < terms[i].first) {
      out.terms.push_back(o.terms[j++]);
    } else {
      const int64_t c = terms[i].second + o.terms[j].second;
      if (c != 0)
        out.terms.emplace_back(terms[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

AffineExpr AffineExpr::operator+(int64_t c) const {
  AffineExpr out = *this;
  out.constant += c;
  return out;
}

AffineExpr AffineExpr::operator*(int64_t c) const {
  AffineExpr out;
  if (c == 0)
    return out;
  out.constant = constant * c;
  out.terms.reserve(terms.size());
  for (const auto &[v, k] : terms)
    out.terms.emplace_back(v, k * c);
  return out;
}

int64_t AffineExpr::coeff_of(int32_t v) const {
  for (const auto &[var, c] : terms)
    if (var == v)
      return c;
  return 0;
}

AffineExpr AffineExpr::substitute(int32_t v, const AffineExpr &repl) const {
  const int64_t c = coeff_of(v);
  if (c == 0)
    return *this;
  AffineExpr rest;
  rest.constant = constant;
  for (const auto &[var, k] : terms)
    if (var != v)
      rest.terms.emplace_back(var, k);
  return rest + repl * c;
}

int64_t AffineExpr::eval(std::span<const int64_t> env) const {
  int64_t out = constant;
  for (const auto &[v, c] : terms)
    out += c * env[v];
  return out;
}

std::string print_affine(const AffineExpr &e) {
  std::ostringstream out;
  bool first = true;
  for (const auto &[v, c] : e.terms) {
    if (!first)
      out << "+";
    if (c != 1)
      out << c << "*";
    out << "i" << v;
    first = false;
  }
  if (e.constant != 0 || first) {
    if (!first)
      out << "+";
    out << e.constant;
  }
  return out.str();
}

bool is_complex_stmt(const Stmt &s) {
  return std::holds_alternative<CMatVec>(s) ||
         std::holds_alternative<CPointMul>(s) ||
         std::holds_alternative<CCopy>(s);
}

int64_t loop_trip_count(const Loop &l) {
  if (l.upper <= l.lower)
    return 0;
  return (l.upper - l.lower + l.step - 1) / l.step;
}

// --- ComplexBuffer ----------------------------------------------------------

ComplexBuffer ComplexBuffer::zeros(int64_t n, ComplexLayout layout) {
  ComplexBuffer b;
  b.data.assign(2 * n, 0.0);
  b.layout = layout;
  b.logical_len = n;
  return b;
}

ComplexBuffer ComplexBuffer::from_vector(const std::vector<cplx> &v,
                                         ComplexLayout layout) {
  ComplexBuffer b = zeros(static_cast<int64_t>(v.size()), layout);
  for (int64_t j = 0; j < b.logical_len; ++j)
    b.set(j, v[j]);
  return b;
}

cplx ComplexBuffer::get(int64_t j) const {
  if (layout == ComplexLayout::Interleaved)
    return {data[2 * j], data[2 * j + 1]};
  return {data[j], data[logical_len + j]};
}

void ComplexBuffer::set(int64_t j, cplx v) {
  if (layout == ComplexLayout::Interleaved) {
    data[2 * j] = v.real();
    data[2 * j + 1] = v.imag();
  } else {
    data[j] = v.real();
    data[logical_len + j] = v.imag();
  }
}

std::vector<cplx> ComplexBuffer::to_vector() const {
  std::vector<cplx> v(logical_len);
  for (int64_t j = 0; j < logical_len; ++j)
    v[j] = get(j);
  return v;
}

ComplexBuffer ComplexBuffer::relayout(ComplexLayout target) const {
  if (target == layout)
    return *this;
  ComplexBuffer out = zeros(logical_len, target);
  for (int64_t j = 0; j < logical_len; ++j)
    out.set(j, get(j));
  return out;
}

// --- printing ---------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print_slice(const BufSlice &s, const LoopProgram &prog) {
  std::ostringstream out;
  out << prog.buffers[s.buf].name << "[" << print_affine(s.slice.start) << ":"
      << s.slice.stride << ":" << s.slice.count << "]";
  return out.str();
}

std::string print_operand(const Operand &o) {
  return o.kind == Operand::Reg ? "r" + std::to_string(o.reg) : fmt_double(o.imm);
}

void print_stmt(const Stmt &s, const LoopProgram &prog, std::ostringstream &out) {
  if (const auto *mv = std::get_if<CMatVec>(&s)) {
    out << "cmatvec kernel=" << mv->kernel.rows << "x" << mv->kernel.cols
        << " " << print_slice(mv->out, prog) << " = " << print_slice(mv->in, prog);
  } else if (const auto *pm = std::get_if<CPointMul>(&s)) {
    out << "cpointmul " << print_slice(pm->out, prog) << " = "
        << print_slice(pm->coeff, prog) << " * " << print_slice(pm->in, prog);
  } else if (const auto *cp = std::get_if<CCopy>(&s)) {
    out << "ccopy " << print_slice(cp->out, prog) << " = "
        << print_slice(cp->in, prog);
  } else if (const auto *ld = std::get_if<FLoad>(&s)) {
    out << "fload r" << ld->dst << " = " << prog.buffers[ld->buf].name << "["
        << print_affine(ld->idx) << "]";
  } else if (const auto *st = std::get_if<FStore>(&s)) {
    out << "fstore " << prog.buffers[st->buf].name << "["
        << print_affine(st->idx) << "] = " << print_operand(st->src);
  } else if (const auto *bin = std::get_if<FBin>(&s)) {
    static const char *const names[] = {"fadd", "fsub", "fmul"};
    out << names[bin->op] << " r" << bin->dst << " = " << print_operand(bin->a)
        << ", " << print_operand(bin->b);
  } else if (const auto *fc = std::get_if<FCopy>(&s)) {
    out << "fcopy " << prog.buffers[fc->out_buf].name << "["
        << print_affine(fc->out_idx) << ":1:" << fc->count << "] = "
        << prog.buffers[fc->in_buf].name << "[" << print_affine(fc->in_idx)
        << ":1:" << fc->count << "]";
  } else if (const auto *vl = std::get_if<VLoad>(&s)) {
    out << "vload r" << vl->dst << " = " << prog.buffers[vl->buf].name << "["
        << print_affine(vl->idx) << "] stride=" << vl->lane_stride;
  } else if (const auto *vs = std::get_if<VStore>(&s)) {
    out << "vstore " << prog.buffers[vs->buf].name << "["
        << print_affine(vs->idx) << "] stride=" << vs->lane_stride << " = "
        << print_operand(vs->src);
  } else {
    const auto &sh = std::get<VShuffle>(s);
    out << "shuffle r" << sh.dst << " = r" << sh.a << ", r" << sh.b << ", [";
    for (size_t i = 0; i < sh.pattern.size(); ++i) {
      if (i)
        out << ",";
      out << sh.pattern[i];
    }
    out << "]";
  }
}

} // namespace

std::string print_stmt_line(const Stmt &s, const LoopProgram &prog) {
  std::ostringstream out;
  print_stmt(s, prog, out);
  return out.str();
}

std::string print_program(const LoopProgram &prog) {
  std::ostringstream out;
  out << "program n=" << prog.n;
  if (prog.layout)
    out << " layout="
        << (*prog.layout == ComplexLayout::Interleaved ? "interleaved" : "split");
  out << "\n";
  for (const BufferDecl &b : prog.buffers) {
    out << "buffer " << b.name << ": "
        << (b.kind == BufKind::Main ? "main" : "coeff") << " len=" << b.len
        << "\n";
  }
  for (size_t i = 0; i < prog.nests.size(); ++i) {
    const LoopNest &nest = prog.nests[i];
    out << "nest " << i << " (" << nest.label
        << "): " << prog.buffers[nest.in_buf].name << " -> "
        << prog.buffers[nest.out_buf].name << "\n";
    std::string indent = "  ";
    for (const Loop &l : nest.loops) {
      out << indent << (l.parallel ? "parallel for i" : "for i") << l.var
          << " in [" << l.lower << ", " << l.upper << ") step " << l.step;
      if (l.tiled)
        out << " tiled(" << *l.tiled << ")";
      if (l.vec)
        out << " vectorized(w=" << l.vec->width << ", "
            << (l.vec->position == VecPosition::Inner ? "inner" : "outer")
            << ")";
      out << "\n";
      indent += "  ";
    }
    for (const Stmt &s : nest.body) {
      out << indent;
      print_stmt(s, prog, out);
      out << "\n";
    }
  }
  return out.str();
}

// --- static bounds checking -------------------------------------------------

namespace {

struct Range {
  int64_t lo = 0;
  int64_t hi = 0; // inclusive
};

// Exact range of an affine expression over a box of induction ranges.
Range affine_range(const AffineExpr &e, std::span<const Range> vars) {
  Range r{e.constant, e.constant};
  for (const auto &[v, c] : e.terms) {
    const Range vr = vars[v];
    if (c >= 0) {
      r.lo += c * vr.lo;
      r.hi += c * vr.hi;
    } else {
      r.lo += c * vr.hi;
      r.hi += c * vr.lo;
    }
  }
  return r;
}

class BoundsChecker {
public:
  explicit BoundsChecker(const LoopProgram &prog) : prog_(prog) {}

  void run() {
    for (size_t i = 0; i < prog_.nests.size(); ++i)
      check_nest(prog_.nests[i], i);
  }

private:
  void check_nest(const LoopNest &nest, size_t nest_idx) {
    vars_.assign(prog_.next_var, Range{0, 0});
    lanes_ = 1;
    for (const Loop &l : nest.loops) {
      if (loop_trip_count(l) == 0)
        return; // empty nest touches nothing
      const int64_t last = l.lower + (loop_trip_count(l) - 1) * l.step;
      vars_[l.var] = Range{l.lower, last};
      if (l.vec)
        lanes_ = l.vec->width;
    }
    nest_idx_ = nest_idx;
    for (const Stmt &s : nest.body)
      check_stmt(s);
  }

  void require(int32_t buf, Range idx, bool complex_indexed) {
    const int64_t limit =
        complex_indexed ? prog_.buffers[buf].len : 2 * prog_.buffers[buf].len;
    if (idx.lo < 0 || idx.hi >= limit)
      throw BoundsError("nest " + std::to_string(nest_idx_) + ": access to " +
                        prog_.buffers[buf].name + " spans [" +
                        std::to_string(idx.lo) + ", " + std::to_string(idx.hi) +
                        "] outside [0, " + std::to_string(limit) + ")");
  }

  void check_slice(const BufSlice &s) {
    Range base = affine_range(s.slice.start, vars_);
    const int64_t extent = (s.slice.count - 1) * s.slice.stride;
    require(s.buf, Range{base.lo, base.hi + extent}, true);
  }

  void check_stmt(const Stmt &s) {
    if (const auto *mv = std::get_if<CMatVec>(&s)) {
      check_slice(mv->in);
      check_slice(mv->out);
    } else if (const auto *pm = std::get_if<CPointMul>(&s)) {
      check_slice(pm->coeff);
      check_slice(pm->in);
      check_slice(pm->out);
    } else if (const auto *cp = std::get_if<CCopy>(&s)) {
      check_slice(cp->in);
      check_slice(cp->out);
    } else if (const auto *ld = std::get_if<FLoad>(&s)) {
      require(ld->buf, affine_range(ld->idx, vars_), false);
    } else if (const auto *st = std::get_if<FStore>(&s)) {
      require(st->buf, affine_range(st->idx, vars_), false);
    } else if (const auto *fc = std::get_if<FCopy>(&s)) {
      Range in = affine_range(fc->in_idx, vars_);
      Range out = affine_range(fc->out_idx, vars_);
      require(fc->in_buf, Range{in.lo, in.hi + fc->count - 1}, false);
      require(fc->out_buf, Range{out.lo, out.hi + fc->count - 1}, false);
    } else if (const auto *vl = std::get_if<VLoad>(&s)) {
      require(vl->buf, lane_extend(affine_range(vl->idx, vars_), vl->lane_stride),
              false);
    } else if (const auto *vs = std::get_if<VStore>(&s)) {
      require(vs->buf, lane_extend(affine_range(vs->idx, vars_), vs->lane_stride),
              false);
    }
    // FBin and VShuffle touch registers only.
  }

  Range lane_extend(Range base, int64_t lane_stride) const {
    const int64_t extent = (lanes_ - 1) * lane_stride;
    if (extent >= 0)
      base.hi += extent;
    else
      base.lo += extent;
    return base;
  }

  const LoopProgram &prog_;
  std::vector<Range> vars_;
  size_t nest_idx_ = 0;
  int64_t lanes_ = 1;
};

} // namespace

void check_bounds(const LoopProgram &prog) { BoundsChecker(prog).run(); }

} // namespace fftgen
