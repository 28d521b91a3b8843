// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/formula.hpp"

#include <algorithm>
#include <sstream>

namespace fftgen {

namespace {

bool is_pow2(int64_t n) { return n >= 1 && (n & (n - 1)) == 0; }

FormulaPtr make(FormulaExpr::Node node, int64_t dim) {
  return std::make_shared<const FormulaExpr>(std::move(node), dim);
}

} // namespace

FormulaPtr dft(int64_t n) {
  if (n < 1)
    throw PlanError("DFT size must be positive, got " + std::to_string(n));
  return make(Dft{n}, n);
}

FormulaPtr identity(int64_t n) {
  if (n < 1)
    throw PlanError("identity size must be positive, got " + std::to_string(n));
  return make(Identity{n}, n);
}

FormulaPtr stride_permute(int64_t total, int64_t stride) {
  if (total < 1 || stride < 1 || total % stride != 0)
    throw DimensionError("stride permutation Pi " + std::to_string(total) + " " +
                         std::to_string(stride) + ": stride must divide total");
  return make(StridePermute{total, stride}, total);
}

FormulaPtr twiddle_diag(int64_t total, int64_t block) {
  if (total < 1 || block < 1 || total % block != 0)
    throw DimensionError("twiddle diagonal D " + std::to_string(total) + " " +
                         std::to_string(block) + ": block must divide total");
  return make(TwiddleDiag{total, block}, total);
}

FormulaPtr kronecker(FormulaPtr left, FormulaPtr right) {
  const int64_t d = left->dim() * right->dim();
  return make(Kronecker{std::move(left), std::move(right)}, d);
}

FormulaPtr compose(std::vector<FormulaPtr> factors) {
  if (factors.empty())
    throw DimensionError("composition needs at least one factor");
  if (factors.size() == 1)
    return factors.front();
  const int64_t d = factors.front()->dim();
  for (size_t i = 1; i < factors.size(); ++i) {
    if (factors[i]->dim() != d) {
      std::ostringstream msg;
      msg << "composition dimension mismatch (" << factors[i - 1]->dim()
          << " vs " << factors[i]->dim() << "): factor '"
          << print_formula(*factors[i - 1]) << "' composed with '"
          << print_formula(*factors[i]) << "'";
      throw DimensionError(msg.str());
    }
  }
  return make(Compose{std::move(factors)}, d);
}

bool structurally_equal(const FormulaExpr &a, const FormulaExpr &b) {
  if (a.node().index() != b.node().index() || a.dim() != b.dim())
    return false;
  if (const auto *x = formula_cast<Dft>(a))
    return x->size == formula_cast<Dft>(b)->size;
  if (const auto *x = formula_cast<Identity>(a))
    return x->size == formula_cast<Identity>(b)->size;
  if (const auto *x = formula_cast<StridePermute>(a)) {
    const auto *y = formula_cast<StridePermute>(b);
    return x->total == y->total && x->stride == y->stride;
  }
  if (const auto *x = formula_cast<TwiddleDiag>(a)) {
    const auto *y = formula_cast<TwiddleDiag>(b);
    return x->total == y->total && x->block == y->block;
  }
  if (const auto *x = formula_cast<Kronecker>(a)) {
    const auto *y = formula_cast<Kronecker>(b);
    return structurally_equal(*x->left, *y->left) &&
           structurally_equal(*x->right, *y->right);
  }
  const auto *x = formula_cast<Compose>(a);
  const auto *y = formula_cast<Compose>(b);
  if (x->factors.size() != y->factors.size())
    return false;
  for (size_t i = 0; i < x->factors.size(); ++i)
    if (!structurally_equal(*x->factors[i], *y->factors[i]))
      return false;
  return true;
}

namespace {

// Print precedence: compose binds loosest, kron next, atoms tightest. Kron
// chains inside a composition are parenthesized, matching the usual way the
// factorizations are written.
void print_rec(const FormulaExpr &f, std::ostringstream &out, bool atom_pos) {
  if (const auto *x = formula_cast<Dft>(f)) {
    out << "DFT " << x->size;
  } else if (const auto *x = formula_cast<Identity>(f)) {
    out << "I " << x->size;
  } else if (const auto *x = formula_cast<StridePermute>(f)) {
    out << "Pi " << x->total << " " << x->stride;
  } else if (const auto *x = formula_cast<TwiddleDiag>(f)) {
    out << "D " << x->total << " " << x->block;
  } else if (const auto *x = formula_cast<Kronecker>(f)) {
    if (atom_pos)
      out << "(";
    print_rec(*x->left, out, formula_cast<Kronecker>(*x->left) == nullptr);
    out << " kron ";
    print_rec(*x->right, out, true);
    if (atom_pos)
      out << ")";
  } else {
    const auto *c = formula_cast<Compose>(f);
    if (atom_pos)
      out << "(";
    for (size_t i = 0; i < c->factors.size(); ++i) {
      if (i)
        out << " . ";
      print_rec(*c->factors[i], out,
                formula_cast<Compose>(*c->factors[i]) != nullptr ||
                    formula_cast<Kronecker>(*c->factors[i]) != nullptr);
    }
    if (atom_pos)
      out << ")";
  }
}

} // namespace

std::string print_formula(const FormulaExpr &f) {
  std::ostringstream out;
  print_rec(f, out, false);
  return out.str();
}

FormulaPtr plan_cooley_tukey(int64_t n, int64_t radix) {
  if (!is_pow2(n))
    throw PlanError("size must be a power of two, got " + std::to_string(n));
  if (radix < 2 || !is_pow2(radix))
    throw PlanError("radix must be a power of two >= 2, got " +
                    std::to_string(radix));
  if (n <= radix)
    return dft(n);
  if (n % radix != 0)
    throw PlanError("radix " + std::to_string(radix) + " does not divide " +
                    std::to_string(n));
  const int64_t k = radix;
  const int64_t m = n / k;
  return compose({kronecker(dft(k), identity(m)), twiddle_diag(n, m),
                  kronecker(identity(k), plan_cooley_tukey(m, radix)),
                  stride_permute(n, k)});
}

FormulaPtr plan_stockham(int64_t n, int64_t radix) {
  if (!is_pow2(n))
    throw PlanError("size must be a power of two, got " + std::to_string(n));
  if (radix < 2 || !is_pow2(radix))
    throw PlanError("radix must be a power of two >= 2, got " +
                    std::to_string(radix));
  if (n == 1)
    return dft(1);

  // Stage t covers the sub-transform of size s, replicated over k = n/s
  // already-computed slots. The first-applied stage is the plain butterfly;
  // every later stage carries its twiddle diagonal and a stride permutation
  // folded under (x) I_k, so the sequence is self-sorting.
  std::vector<FormulaPtr> factors;
  int64_t remaining = n;
  while (remaining > 1) {
    const int64_t r = std::min(radix, remaining);
    const int64_t s = remaining;
    const int64_t k = n / s;
    factors.push_back(n / r == 1 ? dft(r)
                                 : kronecker(dft(r), identity(n / r)));
    if (s > r) {
      factors.push_back(k == 1 ? twiddle_diag(s, s / r)
                               : kronecker(twiddle_diag(s, s / r), identity(k)));
      factors.push_back(kronecker(stride_permute(s, r), identity(k)));
    }
    remaining /= r;
  }
  return compose(std::move(factors));
}

std::vector<cplx> twiddle_coefficients(int64_t total, int64_t block) {
  const int64_t k_count = total / block;
  std::vector<cplx> coeffs(total);
  for (int64_t k = 0; k < k_count; ++k)
    for (int64_t m = 0; m < block; ++m)
      coeffs[k * block + m] = unit_root(total, k * m);
  return coeffs;
}

ComplexMatrix materialize(const FormulaExpr &f, int64_t cap) {
  if (f.dim() > cap)
    throw PlanError("materialization cap exceeded: dimension " +
                    std::to_string(f.dim()) + " > " + std::to_string(cap));
  if (const auto *x = formula_cast<Dft>(f))
    return dft_matrix(x->size);
  if (const auto *x = formula_cast<Identity>(f))
    return identity_matrix(x->size);
  if (const auto *x = formula_cast<StridePermute>(f)) {
    const int64_t k_count = x->stride;
    const int64_t m_count = x->total / x->stride;
    ComplexMatrix m(x->total, x->total);
    for (int64_t k = 0; k < k_count; ++k)
      for (int64_t j = 0; j < m_count; ++j)
        m.at(k * m_count + j, j * k_count + k) = 1.0;
    return m;
  }
  if (const auto *x = formula_cast<TwiddleDiag>(f)) {
    const auto coeffs = twiddle_coefficients(x->total, x->block);
    ComplexMatrix m(x->total, x->total);
    for (int64_t i = 0; i < x->total; ++i)
      m.at(i, i) = coeffs[i];
    return m;
  }
  if (const auto *x = formula_cast<Kronecker>(f))
    return kron(materialize(*x->left, cap), materialize(*x->right, cap));
  const auto *x = formula_cast<Compose>(f);
  ComplexMatrix result = materialize(*x->factors.front(), cap);
  for (size_t i = 1; i < x->factors.size(); ++i)
    result = matmul(result, materialize(*x->factors[i], cap));
  return result;
}

} // namespace fftgen
