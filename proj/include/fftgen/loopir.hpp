// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Explicit loop IR. Bufferization lowers each fused operator to one loop nest
// over strided slices of ping-pong buffers; later passes rewrite complex
// statements to scalar floats under a chosen layout, tile, and vectorize.
// All loop bounds are compile-time constants and every loop is parallel.

#ifndef FFTGEN_LOOPIR_HPP
#define FFTGEN_LOOPIR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fftgen/error.hpp"
#include "fftgen/matrix.hpp"
#include "fftgen/rewrite.hpp"

namespace fftgen {

// --- index arithmetic -------------------------------------------------------

/// Affine expression over loop induction variables: constant + sum coeff*var.
/// Terms are kept sorted by variable id with no zero coefficients, so equal
/// expressions have equal representations.
struct AffineExpr {
  int64_t constant = 0;
  std::vector<std::pair<int32_t, int64_t>> terms; // (var, coeff), sorted

  static AffineExpr make(int64_t constant) { return AffineExpr{constant, {}}; }
  static AffineExpr var(int32_t v, int64_t coeff = 1);

  AffineExpr operator+(const AffineExpr &o) const;
  AffineExpr operator+(int64_t c) const;
  AffineExpr operator*(int64_t c) const;

  int64_t coeff_of(int32_t v) const;
  /// Replaces variable v by the given expression (used when tiling splits an
  /// induction variable into outer + inner).
  AffineExpr substitute(int32_t v, const AffineExpr &repl) const;
  int64_t eval(std::span<const int64_t> env) const;

  bool operator==(const AffineExpr &o) const = default;
};

std::string print_affine(const AffineExpr &e);

// --- statements -------------------------------------------------------------

/// Elements start, start+stride, ..., start+(count-1)*stride of a buffer.
struct Slice {
  AffineExpr start;
  int64_t stride = 1;
  int64_t count = 1;
};

struct BufSlice {
  int32_t buf = 0;
  Slice slice;
};

/// out = kernel * in over complex-valued slices (count == kernel dim).
struct CMatVec {
  ComplexMatrix kernel;
  BufSlice in;
  BufSlice out;
};

/// out = coeff * in, one complex element each.
struct CPointMul {
  BufSlice coeff;
  BufSlice in;
  BufSlice out;
};

/// Complex block copy, unit internal stride.
struct CCopy {
  BufSlice in;
  BufSlice out;
};

/// Operand of a scalar/vector float operation.
struct Operand {
  enum Kind { Reg, Imm } kind = Reg;
  int32_t reg = 0;
  double imm = 0.0;

  static Operand r(int32_t reg) { return Operand{Reg, reg, 0.0}; }
  static Operand c(double v) { return Operand{Imm, 0, v}; }
};

struct FLoad {
  int32_t dst;
  int32_t buf;
  AffineExpr idx;
};

struct FStore {
  Operand src;
  int32_t buf;
  AffineExpr idx;
};

struct FBin {
  enum Op { Add, Sub, Mul } op;
  int32_t dst;
  Operand a;
  Operand b;
};

/// Float block copy (from complex block copies after lowering).
struct FCopy {
  int32_t in_buf;
  AffineExpr in_idx;
  int32_t out_buf;
  AffineExpr out_idx;
  int64_t count;
};

/// Vector load of `width` lanes; lane l reads idx + l*lane_stride.
/// lane_stride 0 is a broadcast, 1 a unit-stride load, >= 2 a gather.
struct VLoad {
  int32_t dst;
  int32_t buf;
  AffineExpr idx;
  int64_t lane_stride;
};

struct VStore {
  Operand src;
  int32_t buf;
  AffineExpr idx;
  int64_t lane_stride;
};

/// out[l] = concat(a, b)[pattern[l]]; pattern indices in [0, 2*width).
struct VShuffle {
  int32_t dst;
  int32_t a;
  int32_t b;
  std::vector<int32_t> pattern;
};

using Stmt = std::variant<CMatVec, CPointMul, CCopy, FLoad, FStore, FBin, FCopy,
                          VLoad, VStore, VShuffle>;

bool is_complex_stmt(const Stmt &s);

// --- loops and programs -----------------------------------------------------

enum class VecPosition { Inner, Outer };

struct VecInfo {
  int64_t width = 1;
  VecPosition position = VecPosition::Inner;
  int64_t orig_step = 1; // lane l stands for iv + l*orig_step
};

struct Loop {
  int32_t var = 0;
  int64_t lower = 0;
  int64_t upper = 0; // exclusive
  int64_t step = 1;
  bool parallel = true;
  std::optional<int64_t> tiled;  // tile size annotation
  std::optional<VecInfo> vec;    // vectorization annotation
};

int64_t loop_trip_count(const Loop &l);

struct LoopNest {
  std::vector<Loop> loops; // outermost first
  std::vector<Stmt> body;
  int32_t in_buf = 0;
  int32_t out_buf = 1;
  int32_t num_regs = 0; // scalar/vector registers used by the body
  std::string label;    // originating fused op, for dumps
};

enum class ComplexLayout { Interleaved, Split };

enum class BufKind { Main, Coeff };

struct BufferDecl {
  std::string name;
  BufKind kind = BufKind::Main;
  int64_t len = 0;          // complex elements; float storage is 2*len
  std::vector<cplx> coeff;  // constant contents for Coeff buffers
};

/// A bufferized pipeline: nests execute in order, alternating between the two
/// main buffers; coefficient buffers are read-only constants.
struct LoopProgram {
  int64_t n = 0;
  std::optional<ComplexLayout> layout; // set once lowered to floats
  std::vector<BufferDecl> buffers;     // [0], [1] are the ping-pong mains
  std::vector<LoopNest> nests;
  int32_t in_buf = 0;
  int32_t out_buf = 0;
  int32_t next_var = 0;
};

// --- user-facing complex storage --------------------------------------------

/// Flat float64 storage for n complex values under a declared layout.
/// Interleaved keeps value j at (2j, 2j+1); Split keeps the real parts in
/// [0, n) and the imaginary parts in [n, 2n).
struct ComplexBuffer {
  std::vector<double> data; // length 2*logical_len
  ComplexLayout layout = ComplexLayout::Interleaved;
  int64_t logical_len = 0;

  static ComplexBuffer zeros(int64_t n, ComplexLayout layout);
  static ComplexBuffer from_vector(const std::vector<cplx> &v,
                                   ComplexLayout layout);

  cplx get(int64_t j) const;
  void set(int64_t j, cplx v);
  std::vector<cplx> to_vector() const;
  ComplexBuffer relayout(ComplexLayout target) const;
};

// --- passes -----------------------------------------------------------------

/// Lowers the fused pipeline to loop nests, one per operator, per the five
/// bufferization templates. All loops come out parallel.
LoopProgram bufferize(std::span<const FusedOp> ops, int64_t n);

/// Rewrites every complex statement to scalar float loads/stores/arithmetic
/// with indices mapped per the layout. Requires a complex-typed program.
LoopProgram lower_complex(const LoopProgram &prog, ComplexLayout layout);

struct TilePolicy {
  enum Kind { ExactSize, CacheVolume } kind = ExactSize;
  int64_t value = 0; // tile size or byte budget

  static TilePolicy exact(int64_t t) { return {ExactSize, t}; }
  static TilePolicy cache(int64_t bytes = 32 * 1024) {
    return {CacheVolume, bytes};
  }
};

/// Splits the outermost loop of the nest into an outer/inner pair with inner
/// trip <= the policy's size; emits a remainder nest when the trip count does
/// not divide evenly. Returns 1 or 2 nests.
std::vector<LoopNest> tile_nest(const LoopNest &nest, const TilePolicy &policy,
                                LoopProgram &prog);

/// Applies tile_nest to every nest of the program.
LoopProgram tile(const LoopProgram &prog, const TilePolicy &policy);

struct VectorizeOptions {
  int64_t width = 8;
  VecPosition position = VecPosition::Inner;
  bool interleaved_opt = false; // replace complex-pair gathers with shuffles
};

/// Widens the selected loop of each nest by `width` lanes. Loads and stores
/// become vector accesses; with interleaved_opt, stride-2 accesses over
/// re/im pairs turn into unit-stride loads plus shuffles. Loops whose lanes
/// cannot be expressed that way (block copies, wide strides under the opt)
/// are left scalar. A scalar epilogue is peeled when the trip count does not
/// divide by the width.
LoopProgram vectorize(const LoopProgram &prog, const VectorizeOptions &opts);

/// Statically proves every access in bounds over the full induction ranges;
/// throws BoundsError otherwise.
void check_bounds(const LoopProgram &prog);

/// Textual dump, one statement per line, slices printed as [start:stride:count].
std::string print_program(const LoopProgram &prog);

/// One statement in the dump format (shared with the kernel printer).
std::string print_stmt_line(const Stmt &s, const LoopProgram &prog);

} // namespace fftgen

#endif // FFTGEN_LOOPIR_HPP
