// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Ahead-of-time path: prints a fully lowered program as one dependency-free
// C99 function. Loop bounds are integer literals and coefficient tables are
// hex float literals, so the text is deterministic and round-trips exactly.

#include "fftgen/exec.hpp"

#include <cstdio>
#include <sstream>

namespace fftgen {

namespace {

std::string hex_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string c_affine(const AffineExpr &e) {
  std::ostringstream out;
  bool first = true;
  for (const auto &[v, c] : e.terms) {
    if (!first)
      out << " + ";
    if (c != 1)
      out << c << "*";
    out << "i" << v;
    first = false;
  }
  if (e.constant != 0 || first) {
    if (!first)
      out << " + ";
    out << e.constant;
  }
  return out.str();
}

std::string c_operand(const Operand &o) {
  return o.kind == Operand::Reg ? "r" + std::to_string(o.reg)
                                : hex_double(o.imm);
}

class Emitter {
public:
  Emitter(const LoopProgram &prog, const std::string &fn_name)
      : prog_(prog), fn_(fn_name) {}

  std::string run() {
    if (!prog_.layout)
      throw LowerError("emit_c requires a program lowered to floats");
    for (const LoopNest &nest : prog_.nests)
      for (const Stmt &s : nest.body)
        if (is_complex_stmt(s))
          throw LowerError("emit_c: complex-typed statements remain; lower first");
        else if (std::holds_alternative<VLoad>(s) ||
                 std::holds_alternative<VStore>(s) ||
                 std::holds_alternative<VShuffle>(s))
          throw LowerError("emit_c supports scalar programs only; emit before "
                           "vectorizing");

    const int64_t floats = 2 * prog_.n;
    out_ << "/* " << fn_ << ": size-" << prog_.n
         << " transform over float64 data.\n"
         << " * in/out hold 2*n doubles in "
         << (*prog_.layout == ComplexLayout::Interleaved
                 ? "interleaved order (re, im per element)"
                 : "split order (n reals, then n imaginaries)")
         << ".\n * The function is a no-op unless n == " << prog_.n << ". */\n";
    for (size_t i = 0; i < prog_.buffers.size(); ++i) {
      const BufferDecl &b = prog_.buffers[i];
      if (b.kind != BufKind::Coeff)
        continue;
      out_ << "static const double " << b.name << "[" << 2 * b.len << "] = {";
      for (int64_t j = 0; j < 2 * b.len; ++j) {
        if (j)
          out_ << ", ";
        out_ << hex_double(coeff_float(b, j, *prog_.layout));
      }
      out_ << "};\n";
    }
    out_ << "void " << fn_ << "(const double* restrict in, double* restrict out, long n) {\n";
    out_ << "  static double b0[" << floats << "];\n";
    out_ << "  static double b1[" << floats << "];\n";
    out_ << "  long t;\n";
    out_ << "  if (n != " << prog_.n << ") return;\n";
    out_ << "  for (t = 0; t < " << floats << "; ++t) "
         << prog_.buffers[prog_.in_buf].name << "[t] = in[t];\n";
    for (size_t i = 0; i < prog_.nests.size(); ++i)
      emit_nest(prog_.nests[i], i);
    out_ << "  for (t = 0; t < " << floats << "; ++t) out[t] = "
         << prog_.buffers[prog_.out_buf].name << "[t];\n";
    out_ << "}\n";
    return out_.str();
  }

private:
  // Mirrors the executor's per-layout rendering of coefficient tables.
  static double coeff_float(const BufferDecl &b, int64_t j, ComplexLayout layout) {
    if (layout == ComplexLayout::Interleaved)
      return j % 2 == 0 ? b.coeff[j / 2].real() : b.coeff[j / 2].imag();
    return j < b.len ? b.coeff[j].real() : b.coeff[j - b.len].imag();
  }

  void emit_nest(const LoopNest &nest, size_t idx) {
    out_ << "  /* nest " << idx << ": " << nest.label << " */\n";
    std::string indent = "  ";
    for (const Loop &l : nest.loops) {
      out_ << indent << "for (long i" << l.var << " = " << l.lower << "; i"
           << l.var << " < " << l.upper << "; i" << l.var << " += " << l.step
           << ") {\n";
      indent += "  ";
    }
    for (const Stmt &s : nest.body)
      emit_stmt(s, indent);
    for (size_t i = nest.loops.size(); i > 0; --i) {
      indent.resize(indent.size() - 2);
      out_ << indent << "}\n";
    }
  }

  void emit_stmt(const Stmt &s, const std::string &indent) {
    if (const auto *ld = std::get_if<FLoad>(&s)) {
      out_ << indent << "double r" << ld->dst << " = "
           << prog_.buffers[ld->buf].name << "[" << c_affine(ld->idx) << "];\n";
    } else if (const auto *st = std::get_if<FStore>(&s)) {
      out_ << indent << prog_.buffers[st->buf].name << "[" << c_affine(st->idx)
           << "] = " << c_operand(st->src) << ";\n";
    } else if (const auto *bin = std::get_if<FBin>(&s)) {
      static const char *const ops[] = {" + ", " - ", " * "};
      out_ << indent << "double r" << bin->dst << " = " << c_operand(bin->a)
           << ops[bin->op] << c_operand(bin->b) << ";\n";
    } else {
      const auto &fc = std::get<FCopy>(s);
      out_ << indent << "for (long t2 = 0; t2 < " << fc.count << "; ++t2) "
           << prog_.buffers[fc.out_buf].name << "[(" << c_affine(fc.out_idx)
           << ") + t2] = " << prog_.buffers[fc.in_buf].name << "[("
           << c_affine(fc.in_idx) << ") + t2];\n";
    }
  }

  const LoopProgram &prog_;
  std::string fn_;
  std::ostringstream out_;
};

} // namespace

std::string emit_c(const LoopProgram &prog, const std::string &fn_name) {
  return Emitter(prog, fn_name).run();
}

} // namespace fftgen
