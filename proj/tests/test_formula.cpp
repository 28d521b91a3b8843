// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fftgen/formula.hpp"

using namespace fftgen;

namespace {

// Radices exercised against the planner for a given transform size.
std::vector<int64_t> radices_for(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t r : {2, 4, 8, 16})
    if (r <= n && n % r == 0)
      out.push_back(r);
  if (out.empty())
    out.push_back(2); // n == 1 or 2: planners fall through to the base case
  return out;
}

} // namespace

TEST_CASE("parse handles the radix-2 size-4 factorization") {
  FormulaPtr f =
      parse_formula("(DFT 2 kron I 2) . D 4 2 . (I 2 kron DFT 2) . Pi 4 2");
  REQUIRE(f->dim() == 4);
  const auto *c = formula_cast<Compose>(*f);
  REQUIRE(c != nullptr);
  CHECK(c->factors.size() == 4);
  CHECK(formula_cast<Kronecker>(*c->factors[0]) != nullptr);
  CHECK(formula_cast<TwiddleDiag>(*c->factors[1]) != nullptr);
  CHECK(formula_cast<Kronecker>(*c->factors[2]) != nullptr);
  CHECK(formula_cast<StridePermute>(*c->factors[3]) != nullptr);
}

TEST_CASE("parse of a bare identity") {
  FormulaPtr f = parse_formula("I 8");
  const auto *id = formula_cast<Identity>(*f);
  REQUIRE(id != nullptr);
  CHECK(id->size == 8);
}

TEST_CASE("parse rejects mismatched composition dimensions") {
  try {
    parse_formula("(DFT 2 kron I 3) . Pi 4 2");
    FAIL("expected DimensionError");
  } catch (const DimensionError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("6") != std::string::npos);
    CHECK(msg.find("4") != std::string::npos);
  }
}

TEST_CASE("parse reports syntax errors with position") {
  try {
    parse_formula("DFT 2 .\n Pi 4 x");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line == 2);
    CHECK(e.column == 7);
  }
  CHECK_THROWS_AS(parse_formula("DFT"), ParseError);
  CHECK_THROWS_AS(parse_formula("Foo 4"), ParseError);
  CHECK_THROWS_AS(parse_formula("DFT 2 DFT 2"), ParseError);
  CHECK_THROWS_AS(parse_formula("(DFT 2"), ParseError);
}

TEST_CASE("print/parse round-trips planner output and hand-written forms") {
  std::vector<FormulaPtr> cases = {
      parse_formula("DFT 2 kron I 2 kron DFT 2"),
      parse_formula("I 2 kron (DFT 2 kron I 2)"),
      parse_formula("(DFT 2 . DFT 2) kron I 4"),
      parse_formula("Pi 8 2 . (D 8 4 . I 8) . (I 2 kron DFT 4)"),
  };
  for (int64_t n : {2, 4, 8, 16, 32, 64})
    for (int64_t r : radices_for(n)) {
      cases.push_back(plan_cooley_tukey(n, r));
      cases.push_back(plan_stockham(n, r));
    }
  for (const FormulaPtr &f : cases) {
    const std::string text = print_formula(*f);
    FormulaPtr back = parse_formula(text);
    CHECK_MESSAGE(structurally_equal(*f, *back), "round-trip failed: ", text);
    CHECK(print_formula(*back) == text);
  }
}

TEST_CASE("cooley-tukey plan instantiates the radix factorization at n=4") {
  FormulaPtr planned = plan_cooley_tukey(4, 2);
  FormulaPtr expected =
      parse_formula("(DFT 2 kron I 2) . D 4 2 . (I 2 kron DFT 2) . Pi 4 2");
  CHECK(structurally_equal(*planned, *expected));
}

TEST_CASE("cooley-tukey base case and nesting shape") {
  CHECK(structurally_equal(*plan_cooley_tukey(2, 2), *dft(2)));
  CHECK(structurally_equal(*plan_cooley_tukey(1, 2), *dft(1)));

  FormulaPtr f = plan_cooley_tukey(8, 2);
  const auto *c = formula_cast<Compose>(*f);
  REQUIRE(c != nullptr);
  REQUIRE(c->factors.size() == 4);
  const auto *k = formula_cast<Kronecker>(*c->factors[2]);
  REQUIRE(k != nullptr);
  const auto *nested = formula_cast<Compose>(*k->right);
  REQUIRE(nested != nullptr);
  CHECK(nested->factors.size() == 4);
}

TEST_CASE("planner input validation") {
  CHECK_THROWS_AS(plan_cooley_tukey(12, 2), PlanError);
  CHECK_THROWS_AS(plan_cooley_tukey(8, 3), PlanError);
  CHECK_THROWS_AS(plan_cooley_tukey(0, 2), PlanError);
  CHECK_THROWS_AS(plan_stockham(12, 2), PlanError);
  CHECK_THROWS_AS(plan_stockham(8, 5), PlanError);
}

TEST_CASE("materialize small fixed cases") {
  ComplexMatrix d1 = materialize(*dft(1));
  REQUIRE(d1.rows == 1);
  CHECK(d1.at(0, 0) == cplx{1.0, 0.0});

  ComplexMatrix d2 = materialize(*dft(2));
  CHECK(d2.at(0, 0) == cplx{1.0, 0.0});
  CHECK(d2.at(0, 1) == cplx{1.0, 0.0});
  CHECK(d2.at(1, 0) == cplx{1.0, 0.0});
  CHECK(d2.at(1, 1) == cplx{-1.0, 0.0});

  // D^4_2 = diag(1, 1, 1, -i): entries w_4^(k*m) over (k, m) in [0,2)x[0,2).
  ComplexMatrix t = materialize(*twiddle_diag(4, 2));
  CHECK(t.at(0, 0) == cplx{1.0, 0.0});
  CHECK(t.at(1, 1) == cplx{1.0, 0.0});
  CHECK(t.at(2, 2) == cplx{1.0, 0.0});
  CHECK(t.at(3, 3) == cplx{0.0, -1.0});
  CHECK(t.at(0, 1) == cplx{0.0, 0.0});
}

TEST_CASE("materialize enforces its dimension cap") {
  CHECK_THROWS_AS(materialize(*identity(512)), PlanError);
  CHECK_NOTHROW(materialize(*identity(512), 512));
}

TEST_CASE("stride permutations materialize to permutation matrices") {
  for (auto [total, stride] :
       {std::pair<int64_t, int64_t>{4, 2}, {8, 2}, {8, 4}, {16, 4}, {16, 16}}) {
    ComplexMatrix p = materialize(*stride_permute(total, stride));
    for (int64_t i = 0; i < p.rows; ++i) {
      int64_t row_ones = 0, col_ones = 0;
      for (int64_t j = 0; j < p.cols; ++j) {
        if (p.at(i, j) == cplx{1.0, 0.0})
          ++row_ones;
        else
          CHECK(p.at(i, j) == cplx{0.0, 0.0});
        if (p.at(j, i) == cplx{1.0, 0.0})
          ++col_ones;
      }
      CHECK(row_ones == 1);
      CHECK(col_ones == 1);
    }
  }
}

TEST_CASE("kronecker of identities is the identity") {
  ComplexMatrix m = materialize(*kronecker(identity(3), identity(4)));
  CHECK(max_abs_diff(m, identity_matrix(12)) == 0.0);
}

TEST_CASE("planner output materializes to the direct DFT matrix") {
  for (int64_t n = 2; n <= 256; n *= 2) {
    const ComplexMatrix reference = dft_matrix(n);
    for (int64_t r : radices_for(n)) {
      CAPTURE(n);
      CAPTURE(r);
      CHECK(max_abs_diff(materialize(*plan_cooley_tukey(n, r)), reference) <
            1e-12);
      CHECK(max_abs_diff(materialize(*plan_stockham(n, r)), reference) <
            1e-12);
    }
  }
}

TEST_CASE("stockham base case and stage structure") {
  CHECK(structurally_equal(*plan_stockham(2, 2), *dft(2)));

  // Size 16 radix 4 is a two-stage sequence with no standalone permutation.
  FormulaPtr f = plan_stockham(16, 4);
  const auto *c = formula_cast<Compose>(*f);
  REQUIRE(c != nullptr);
  int butterflies = 0;
  for (const FormulaPtr &factor : c->factors) {
    CHECK(formula_cast<StridePermute>(*factor) == nullptr);
    if (const auto *k = formula_cast<Kronecker>(*factor))
      if (formula_cast<Dft>(*k->left) != nullptr)
        ++butterflies;
    if (formula_cast<Dft>(*factor) != nullptr)
      ++butterflies;
  }
  CHECK(butterflies == 2);

  for (int64_t n : {8, 32, 64, 128})
    for (int64_t r : radices_for(n)) {
      FormulaPtr plan = plan_stockham(n, r);
      if (const auto *outer = formula_cast<Compose>(*plan))
        for (const FormulaPtr &factor : outer->factors)
          CHECK(formula_cast<StridePermute>(*factor) == nullptr);
    }
}

TEST_CASE("stride permute commutation identity used by the fusion pass") {
  // I_K (x) B  ==  Pi^N_K * (B (x) I_K) * Pi^N_M  with N = K*M, M = dim(B).
  for (auto [k, b_size] :
       {std::pair<int64_t, int64_t>{2, 2}, {2, 4}, {4, 2}, {4, 6}, {3, 5}}) {
    const int64_t n = k * b_size;
    ComplexMatrix b = dft_matrix(b_size);
    ComplexMatrix lhs = kron(identity_matrix(k), b);
    ComplexMatrix rhs = matmul(
        materialize(*stride_permute(n, k), n),
        matmul(kron(b, identity_matrix(k)),
               materialize(*stride_permute(n, b_size), n)));
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
  }
}
