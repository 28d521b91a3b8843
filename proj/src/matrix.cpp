// Copyright 2026 The fftgen Authors
//
// Licensed under the Apache License v2.0 with LLVM Exceptions.
// See https://llvm.org/LICENSE.txt for license information.
// SPDX-License-Identifier: Apache-2.0 WITH LLVM-exception

#include "fftgen/matrix.hpp"

#include <cassert>
#include <cmath>

namespace fftgen {

cplx unit_root(int64_t n, int64_t t) {
  assert(n >= 1);
  t %= n;
  if (t < 0)
    t += n;
  // Quadrant multiples are returned exactly; sin/cos of a rounded pi would
  // otherwise leave ~1e-16 residue in entries that must be +-1 or +-i.
  if (4 * t % n == 0) {
    switch (4 * t / n) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, -1.0};
    case 2:
      return {-1.0, 0.0};
    case 3:
      return {0.0, 1.0};
    }
  }
  const double angle = -2.0 * M_PI * static_cast<double>(t) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

ComplexMatrix identity_matrix(int64_t n) {
  ComplexMatrix m(n, n);
  for (int64_t i = 0; i < n; ++i)
    m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix dft_matrix(int64_t n) {
  ComplexMatrix m(n, n);
  for (int64_t j = 0; j < n; ++j)
    for (int64_t k = 0; k < n; ++k)
      m.at(j, k) = unit_root(n, j * k);
  return m;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix m(a.rows * b.rows, a.cols * b.cols);
  for (int64_t ia = 0; ia < a.rows; ++ia)
    for (int64_t ja = 0; ja < a.cols; ++ja) {
      const cplx v = a.at(ia, ja);
      if (v == cplx{0.0, 0.0})
        continue;
      for (int64_t ib = 0; ib < b.rows; ++ib)
        for (int64_t jb = 0; jb < b.cols; ++jb)
          m.at(ia * b.rows + ib, ja * b.cols + jb) = v * b.at(ib, jb);
    }
  return m;
}

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
  assert(a.cols == b.rows);
  ComplexMatrix m(a.rows, b.cols);
  for (int64_t i = 0; i < a.rows; ++i)
    for (int64_t k = 0; k < a.cols; ++k) {
      const cplx v = a.at(i, k);
      if (v == cplx{0.0, 0.0})
        continue;
      for (int64_t j = 0; j < b.cols; ++j)
        m.at(i, j) += v * b.at(k, j);
    }
  return m;
}

std::vector<cplx> matvec(const ComplexMatrix &m, const std::vector<cplx> &x) {
  assert(static_cast<int64_t>(x.size()) == m.cols);
  std::vector<cplx> y(m.rows);
  for (int64_t i = 0; i < m.rows; ++i) {
    cplx acc = 0.0;
    for (int64_t j = 0; j < m.cols; ++j)
      acc += m.at(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
  assert(a.rows == b.rows && a.cols == b.cols);
  double worst = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i)
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

} // namespace fftgen
