/*
Copyright 2026 the superchan authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/**
 * @file    cmatrix.hpp
 * @brief   Dense complex matrix kernel: Kronecker products, partial trace,
 *          column-stacking vectorization, Hermitian eigendecomposition and
 *          the PSD matrix functions built on it.
 */

#ifndef SUPERCHAN_CMATRIX_HPP_
#define SUPERCHAN_CMATRIX_HPP_

#include <cstddef>
#include <vector>

#include "types.hpp"

namespace superchan {

/*******************************************************************************
 *
 * CMatrix class
 *
 ******************************************************************************/

/**
 * Dense complex matrix, row-major storage. Constructors reject non-finite
 * entries; all operations are value-semantic and thread-safe.
 */
class CMatrix {
public:
  CMatrix() = default;

  /// Zero matrix of the given shape.
  CMatrix(std::size_t rows, std::size_t cols);

  /// Matrix from row-major entries. Throws if sizes mismatch or any entry
  /// is NaN/Inf.
  CMatrix(std::size_t rows, std::size_t cols, cvector_t entries);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  complex_t &operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const complex_t &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const cvector_t &data() const { return data_; }
  cvector_t &data() { return data_; }

  CMatrix operator+(const CMatrix &other) const;
  CMatrix operator-(const CMatrix &other) const;
  CMatrix operator*(const CMatrix &other) const;
  CMatrix operator*(complex_t scalar) const;
  CMatrix operator-() const;
  CMatrix &operator+=(const CMatrix &other);
  CMatrix &operator-=(const CMatrix &other);
  CMatrix &operator*=(complex_t scalar);

  CMatrix transpose() const;
  CMatrix conjugate() const;
  CMatrix adjoint() const;

  complex_t trace() const;
  double frobenius_norm() const;

  /// Frobenius norm of (A - A^dagger); 0 for exactly Hermitian matrices.
  double hermiticity_error() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  cvector_t data_;
};

inline CMatrix operator*(complex_t scalar, const CMatrix &m) {
  return m * scalar;
}

/// Hilbert-Schmidt inner product Tr[a^dagger b].
complex_t hs_inner(const CMatrix &a, const CMatrix &b);

/*******************************************************************************
 *
 * Multi-index structure
 *
 ******************************************************************************/

/**
 * Ordered local dimensions of the tensor factors of a composite space.
 * Factor 0 is the most significant index (Kronecker-product ordering).
 */
struct SubsystemShape {
  std::vector<std::size_t> dims;

  std::size_t product() const;
  /// Throws if the matrix is not square of dimension product().
  void check_matches(const CMatrix &a) const;
};

/*******************************************************************************
 *
 * Tensor algebra
 *
 ******************************************************************************/

/// Kronecker product; dimensions multiply.
CMatrix kron(const CMatrix &a, const CMatrix &b);

/**
 * Partial trace over the factors listed in `traced` (0-based positions into
 * shape.dims). Result dimension is the product of the kept factors; the
 * total trace is preserved. Tracing every factor yields a 1x1 matrix.
 */
CMatrix partial_trace(const CMatrix &a, const SubsystemShape &shape,
                      const std::vector<std::size_t> &traced);

/// Column-stacking vectorization |A>> = sum_ij A_ij |j,i> as a rc x 1 matrix.
CMatrix vectorize(const CMatrix &a);

/// Inverse of vectorize for square matrices; throws when the length is not
/// a perfect square.
CMatrix devectorize(const CMatrix &v);

/*******************************************************************************
 *
 * Hermitian eigendecomposition and PSD functions
 *
 ******************************************************************************/

struct HermEig {
  rvector_t eigenvalues; // ascending
  CMatrix eigenvectors;  // unitary; k-th column pairs with eigenvalues[k]
};

/**
 * Eigendecomposition of a Hermitian matrix: a = V diag(lambda) V^dagger.
 * The input must satisfy ||a - a^dagger||_F <= tol_herm; it is symmetrized
 * before factorization to absorb round-off from contraction chains.
 */
HermEig herm_eig(const CMatrix &a, double tol_herm = 1e-10);

/// Sum of singular values. Square input only.
double trace_norm(const CMatrix &a);

/// Principal square root of a PSD Hermitian matrix. Throws when an
/// eigenvalue lies below -1e-8; small negatives are clipped to zero.
CMatrix psd_sqrt(const CMatrix &a);

/// Frobenius-nearest PSD matrix: eigenvalue clipping, no trace rescaling.
CMatrix project_psd(const CMatrix &a);

/// Minimum eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix &a, double tol_herm = 1e-10);

/**
 * Uhlmann fidelity F(a,b) = (Tr sqrt(sqrt(a) b sqrt(a)))^2 for PSD a, b,
 * computed as ||sqrt(a) sqrt(b)||_1^2. Not restricted to unit-trace inputs;
 * F(a,a) = (Tr a)^2.
 */
double uhlmann_fidelity(const CMatrix &a, const CMatrix &b);

} // namespace superchan

#endif
