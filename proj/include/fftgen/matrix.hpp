// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#ifndef FFTGEN_MATRIX_HPP
#define FFTGEN_MATRIX_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace fftgen {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Used only for small fused kernels and as
/// the materialization oracle; the generated pipelines never touch it.
struct ComplexMatrix {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<cplx> data; // row-major, rows*cols entries

  ComplexMatrix() = default;
  ComplexMatrix(int64_t r, int64_t c) : rows(r), cols(c), data(r * c) {}

  cplx &at(int64_t r, int64_t c) { return data[r * cols + c]; }
  const cplx &at(int64_t r, int64_t c) const { return data[r * cols + c]; }
};

/// exp(-2*pi*i*t/n), the forward-transform root of unity. Exact at quadrant
/// multiples so small DFT kernels get bit-exact +-1 / +-i entries.
cplx unit_root(int64_t n, int64_t t);

ComplexMatrix identity_matrix(int64_t n);

/// The n x n forward DFT matrix, entry [j][k] = unit_root(n, j*k).
ComplexMatrix dft_matrix(int64_t n);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b);
std::vector<cplx> matvec(const ComplexMatrix &m, const std::vector<cplx> &x);

/// max_ij |a[i][j] - b[i][j]|
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

} // namespace fftgen

#endif // FFTGEN_MATRIX_HPP
