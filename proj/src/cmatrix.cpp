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

#include "superchan/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace superchan {

/*******************************************************************************
 *
 * CMatrix class
 *
 ******************************************************************************/

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, complex_t(0.0, 0.0)) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("CMatrix: dimensions must be positive");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, cvector_t entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("CMatrix: dimensions must be positive");
  if (data_.size() != rows * cols)
    throw std::invalid_argument("CMatrix: entries length must equal rows*cols");
  for (const auto &z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

static void check_same_shape(const CMatrix &a, const CMatrix &b,
                             const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string("CMatrix: shape mismatch in ") +
                                op);
}

CMatrix CMatrix::operator+(const CMatrix &other) const {
  check_same_shape(*this, other, "operator+");
  CMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k)
    out.data_[k] += other.data_[k];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix &other) const {
  check_same_shape(*this, other, "operator-");
  CMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k)
    out.data_[k] -= other.data_[k];
  return out;
}

CMatrix &CMatrix::operator+=(const CMatrix &other) {
  check_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k)
    data_[k] += other.data_[k];
  return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &other) {
  check_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k)
    data_[k] -= other.data_[k];
  return *this;
}

CMatrix CMatrix::operator*(const CMatrix &other) const {
  if (cols_ != other.rows_)
    throw std::invalid_argument("CMatrix: inner dimensions mismatch in operator*");
  CMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const complex_t aik = (*this)(i, k);
      if (aik == complex_t(0.0, 0.0))
        continue;
      for (std::size_t j = 0; j < other.cols_; ++j)
        out(i, j) += aik * other(k, j);
    }
  return out;
}

CMatrix CMatrix::operator*(complex_t scalar) const {
  CMatrix out = *this;
  for (auto &z : out.data_)
    z *= scalar;
  return out;
}

CMatrix CMatrix::operator-() const { return (*this) * complex_t(-1.0, 0.0); }

CMatrix &CMatrix::operator*=(complex_t scalar) {
  for (auto &z : data_)
    z *= scalar;
  return *this;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out = *this;
  for (auto &z : out.data_)
    z = std::conj(z);
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(j, i) = std::conj((*this)(i, j));
  return out;
}

complex_t CMatrix::trace() const {
  if (!is_square())
    throw std::invalid_argument("CMatrix: trace of non-square matrix");
  complex_t t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto &z : data_)
    s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::hermiticity_error() const {
  if (!is_square())
    throw std::invalid_argument("CMatrix: hermiticity of non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      s += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
  return std::sqrt(s);
}

complex_t hs_inner(const CMatrix &a, const CMatrix &b) {
  check_same_shape(a, b, "hs_inner");
  complex_t s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    s += std::conj(a.data()[k]) * b.data()[k];
  return s;
}

/*******************************************************************************
 *
 * Multi-index structure
 *
 ******************************************************************************/

std::size_t SubsystemShape::product() const {
  std::size_t p = 1;
  for (std::size_t d : dims) {
    if (d == 0)
      throw std::invalid_argument("SubsystemShape: zero local dimension");
    p *= d;
  }
  return p;
}

void SubsystemShape::check_matches(const CMatrix &a) const {
  if (!a.is_square())
    throw std::invalid_argument("SubsystemShape: matrix must be square");
  if (product() != a.rows())
    throw std::invalid_argument(
        "SubsystemShape: product of local dimensions must equal matrix dimension");
}

/*******************************************************************************
 *
 * Tensor algebra
 *
 ******************************************************************************/

CMatrix kron(const CMatrix &a, const CMatrix &b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const complex_t aij = a(ia, ja);
      if (aij == complex_t(0.0, 0.0))
        continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = aij * b(ib, jb);
    }
  return out;
}

CMatrix partial_trace(const CMatrix &a, const SubsystemShape &shape,
                      const std::vector<std::size_t> &traced) {
  shape.check_matches(a);
  const std::size_t nf = shape.dims.size();
  std::vector<bool> is_traced(nf, false);
  for (std::size_t t : traced) {
    if (t >= nf)
      throw std::invalid_argument("partial_trace: traced index out of range");
    if (is_traced[t])
      throw std::invalid_argument("partial_trace: duplicate traced index");
    is_traced[t] = true;
  }

  // Strides of each factor in the flattened index (factor 0 most significant).
  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t f = nf; f-- > 1;)
    stride[f - 1] = stride[f] * shape.dims[f];

  std::vector<std::size_t> kept, trcd;
  for (std::size_t f = 0; f < nf; ++f)
    (is_traced[f] ? trcd : kept).push_back(f);

  std::size_t dim_kept = 1;
  for (std::size_t f : kept)
    dim_kept *= shape.dims[f];
  std::size_t dim_traced = 1;
  for (std::size_t f : trcd)
    dim_traced *= shape.dims[f];

  // Flattened offset contributed by a composite sub-index over `factors`.
  auto offset = [&](const std::vector<std::size_t> &factors, std::size_t idx) {
    std::size_t off = 0;
    for (std::size_t f = factors.size(); f-- > 0;) {
      const std::size_t d = shape.dims[factors[f]];
      off += (idx % d) * stride[factors[f]];
      idx /= d;
    }
    return off;
  };

  CMatrix out(std::max<std::size_t>(dim_kept, 1),
              std::max<std::size_t>(dim_kept, 1));
  for (std::size_t rk = 0; rk < dim_kept; ++rk) {
    const std::size_t ro = offset(kept, rk);
    for (std::size_t ck = 0; ck < dim_kept; ++ck) {
      const std::size_t co = offset(kept, ck);
      complex_t acc = 0.0;
      for (std::size_t t = 0; t < dim_traced; ++t) {
        const std::size_t to = offset(trcd, t);
        acc += a(ro + to, co + to);
      }
      out(rk, ck) = acc;
    }
  }
  return out;
}

CMatrix vectorize(const CMatrix &a) {
  CMatrix v(a.rows() * a.cols(), 1);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      v(j * a.rows() + i, 0) = a(i, j);
  return v;
}

CMatrix devectorize(const CMatrix &v) {
  if (v.cols() != 1)
    throw std::invalid_argument("devectorize: input must be a column vector");
  const std::size_t len = v.rows();
  const std::size_t n = static_cast<std::size_t>(std::llround(std::sqrt(double(len))));
  if (n * n != len)
    throw std::invalid_argument("devectorize: length is not a perfect square");
  CMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      a(i, j) = v(j * n + i, 0);
  return a;
}

/*******************************************************************************
 *
 * Hermitian eigendecomposition and PSD functions
 *
 ******************************************************************************/

HermEig herm_eig(const CMatrix &a, double tol_herm) {
  if (!a.is_square())
    throw std::invalid_argument("herm_eig: matrix must be square");
  if (a.hermiticity_error() > tol_herm)
    throw std::invalid_argument("herm_eig: matrix is not Hermitian within tolerance");

  const std::size_t n = a.rows();
  // Symmetrize, then hand a column-major copy to LAPACK.
  cvector_t buf(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      buf[i + j * n] = 0.5 * (a(i, j) + std::conj(a(j, i)));

  rvector_t w(n);
  const lapack_int info = LAPACKE_zheev(
      LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double *>(buf.data()),
      static_cast<lapack_int>(n), w.data());
  if (info != 0)
    throw std::runtime_error("herm_eig: zheev failed to converge (info=" +
                             std::to_string(info) + ")");

  HermEig out;
  out.eigenvalues = std::move(w);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      out.eigenvectors(i, j) = buf[i + j * n];
  return out;
}

double min_eigenvalue(const CMatrix &a, double tol_herm) {
  return herm_eig(a, tol_herm).eigenvalues.front();
}

double trace_norm(const CMatrix &a) {
  if (!a.is_square())
    throw std::invalid_argument("trace_norm: matrix must be square");
  const std::size_t n = a.rows();
  if (a.hermiticity_error() <= 1e-12 * std::max(1.0, a.frobenius_norm())) {
    double s = 0.0;
    for (double lam : herm_eig(a, 1e-9 * std::max(1.0, a.frobenius_norm())).eigenvalues)
      s += std::abs(lam);
    return s;
  }
  // Hermitian dilation [[0, A], [A^dagger, 0]] has eigenvalues {+-sigma_i},
  // giving the singular values at full precision.
  CMatrix h(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      h(i, n + j) = a(i, j);
      h(n + j, i) = std::conj(a(i, j));
    }
  double s = 0.0;
  for (double lam : herm_eig(h).eigenvalues)
    s += std::abs(lam);
  return 0.5 * s;
}

// Rebuild V f(diag) V^dagger for a spectral function f.
static CMatrix spectral_apply(const HermEig &eig,
                              const std::vector<double> &f_of_lambda) {
  const std::size_t n = eig.eigenvalues.size();
  CMatrix out(n, n);
  const CMatrix &v = eig.eigenvectors;
  for (std::size_t k = 0; k < n; ++k) {
    const double f = f_of_lambda[k];
    if (f == 0.0)
      continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += f * v(i, k) * std::conj(v(j, k));
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix &a) {
  HermEig eig = herm_eig(a);
  // Eigenvalues below the eigensolver's own resolution are round-off from
  // exact zeros; flooring them keeps sqrt from amplifying 1e-16 noise into
  // 1e-8 contributions (which would spoil fidelity computations).
  const double floor_val = 1e-13 * std::max(0.0, eig.eigenvalues.back());
  rvector_t f(eig.eigenvalues.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (eig.eigenvalues[k] < -1e-8)
      throw std::invalid_argument("psd_sqrt: matrix has eigenvalue below -1e-8");
    f[k] = eig.eigenvalues[k] <= floor_val
               ? 0.0
               : std::sqrt(eig.eigenvalues[k]);
  }
  return spectral_apply(eig, f);
}

CMatrix project_psd(const CMatrix &a) {
  HermEig eig = herm_eig(a);
  rvector_t f(eig.eigenvalues.size());
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = std::max(0.0, eig.eigenvalues[k]);
  return spectral_apply(eig, f);
}

double uhlmann_fidelity(const CMatrix &a, const CMatrix &b) {
  check_same_shape(a, b, "uhlmann_fidelity");
  const double t = trace_norm(psd_sqrt(a) * psd_sqrt(b));
  return t * t;
}

} // namespace superchan
