// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception
//
// Tensor-formula IR for FFT algorithms: a DFT of size N is described as a
// composition of Kronecker products of small DFT kernels, twiddle diagonals
// and stride permutations. Planners build the classic radix factorizations;
// materialize() turns any formula into the dense matrix it denotes and is the
// semantic oracle everything downstream is tested against.

#ifndef FFTGEN_FORMULA_HPP
#define FFTGEN_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fftgen/error.hpp"
#include "fftgen/matrix.hpp"

namespace fftgen {

class FormulaExpr;
using FormulaPtr = std::shared_ptr<const FormulaExpr>;

struct Dft {
  int64_t size;
};
struct Identity {
  int64_t size;
};
/// Stride permutation Pi^N_K, the stride-K gather: with M = N/K,
/// output[k*M + j] = input[j*K + k] for k in [0, K), j in [0, M).
/// Block k of the output collects the input elements congruent to k mod K.
struct StridePermute {
  int64_t total;  // N
  int64_t stride; // K, divides N
};
/// Twiddle diagonal D^N_M: entry at flat index k*M + m is w_N^(k*m) with
/// w_N = exp(-2*pi*i/N), k in [0, N/M), m in [0, M).
struct TwiddleDiag {
  int64_t total; // N
  int64_t block; // M, divides N
};
struct Kronecker {
  FormulaPtr left;
  FormulaPtr right;
};
/// Factors applied right-to-left: Compose([A, B, C]) x = A(B(C x)).
struct Compose {
  std::vector<FormulaPtr> factors;
};

/// Immutable formula tree node. All operators are square; dim() is cached at
/// construction so repeated dimension checks stay cheap.
class FormulaExpr {
public:
  using Node =
      std::variant<Dft, Identity, StridePermute, TwiddleDiag, Kronecker, Compose>;

  FormulaExpr(Node node, int64_t dim) : node_(std::move(node)), dim_(dim) {}

  const Node &node() const { return node_; }
  int64_t dim() const { return dim_; }

private:
  Node node_;
  int64_t dim_;
};

template <typename T> const T *formula_cast(const FormulaExpr &e) {
  return std::get_if<T>(&e.node());
}

// Validating factories. These are the only way to build nodes, so every tree
// in the system satisfies the divisibility and dimension invariants.
FormulaPtr dft(int64_t n);
FormulaPtr identity(int64_t n);
FormulaPtr stride_permute(int64_t total, int64_t stride);
FormulaPtr twiddle_diag(int64_t total, int64_t block);
FormulaPtr kronecker(FormulaPtr left, FormulaPtr right);
FormulaPtr compose(std::vector<FormulaPtr> factors);

bool structurally_equal(const FormulaExpr &a, const FormulaExpr &b);

/// Canonical textual form; parse_formula(print_formula(f)) reproduces f.
std::string print_formula(const FormulaExpr &f);

/// Parses the ASCII DSL:
///   expr := term ('.' term)*          composition, applied right-to-left
///   term := atom ('kron' atom)*       left-associative Kronecker product
///   atom := 'DFT' INT | 'I' INT | 'Pi' INT INT | 'D' INT INT | '(' expr ')'
/// Whitespace-insensitive. Throws ParseError with line/column on bad syntax,
/// DimensionError when composition factors disagree in size.
FormulaPtr parse_formula(std::string_view text);

/// Recursive radix decomposition
///   DFT_N = (DFT_K (x) I_M) D^N_M (I_K (x) DFT_M) Pi^N_K,  K = radix, M = N/K
/// expanding only the right-hand DFT factor; DFT sizes <= radix stay as base
/// kernels. Requires power-of-two n and radix.
FormulaPtr plan_cooley_tukey(int64_t n, int64_t radix);

/// Self-sorting iterative factorization: log_radix(N) stages of the form
/// (DFT_r (x) I_{N/r}) * (D (x) I_k) * (Pi (x) I_k), so no standalone stride
/// permutation appears in the stage sequence. Sizes that are not a pure power
/// of the radix get one smaller final stage.
FormulaPtr plan_stockham(int64_t n, int64_t radix);

/// Dense matrix denoted by the formula. O(dim^2) memory, so dim is capped.
ComplexMatrix materialize(const FormulaExpr &f, int64_t cap = 256);

/// Coefficient vector of D^total_block, laid out at flat index k*block + m.
std::vector<cplx> twiddle_coefficients(int64_t total, int64_t block);

} // namespace fftgen

#endif // FFTGEN_FORMULA_HPP
