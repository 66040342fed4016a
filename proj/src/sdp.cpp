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

#include "superchan/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace superchan::sdp {

/*******************************************************************************
 *
 * BlockMatrix
 *
 ******************************************************************************/

BlockMatrix BlockMatrix::zeros(const std::vector<std::size_t> &dims) {
  BlockMatrix m;
  for (std::size_t d : dims)
    m.blocks.emplace_back(d, d);
  return m;
}

BlockMatrix BlockMatrix::identity(const std::vector<std::size_t> &dims,
                                  double scale) {
  BlockMatrix m;
  for (std::size_t d : dims)
    m.blocks.push_back(CMatrix::identity(d) * complex_t(scale, 0.0));
  return m;
}

BlockMatrix &BlockMatrix::operator+=(const BlockMatrix &o) {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    blocks[b] += o.blocks[b];
  return *this;
}

BlockMatrix &BlockMatrix::operator-=(const BlockMatrix &o) {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    blocks[b] -= o.blocks[b];
  return *this;
}

BlockMatrix &BlockMatrix::operator*=(double s) {
  for (auto &blk : blocks)
    blk *= complex_t(s, 0.0);
  return *this;
}

double BlockMatrix::inner(const BlockMatrix &o) const {
  double acc = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    acc += hs_inner(blocks[b], o.blocks[b]).real();
  return acc;
}

double BlockMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const auto &blk : blocks) {
    const double f = blk.frobenius_norm();
    acc += f * f;
  }
  return std::sqrt(acc);
}

std::size_t BlockMatrix::total_dim() const {
  std::size_t n = 0;
  for (const auto &blk : blocks)
    n += blk.rows();
  return n;
}

/*******************************************************************************
 *
 * Dense linear algebra helpers (LAPACK-backed)
 *
 ******************************************************************************/

namespace {

// Cholesky factor L (lower) of a Hermitian positive definite matrix.
// Returns false if the factorization breaks down.
bool cholesky(const CMatrix &a, CMatrix &l) {
  const std::size_t n = a.rows();
  cvector_t buf(n * n, complex_t(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      buf[i + j * n] = 0.5 * (a(i, j) + std::conj(a(j, i)));
  const lapack_int info = LAPACKE_zpotrf(
      LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double *>(buf.data()),
      static_cast<lapack_int>(n));
  if (info != 0)
    return false;
  l = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i)
      l(i, j) = buf[i + j * n];
  return true;
}

// Inverse from a Cholesky factor: A^{-1} = L^{-dag} L^{-1}.
CMatrix inverse_from_cholesky(const CMatrix &l) {
  const std::size_t n = l.rows();
  // Forward-substitute L * Y = I, then back-substitute L^dag * X = Y.
  CMatrix y(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      complex_t rhs = (i == col) ? complex_t(1.0, 0.0) : complex_t(0.0, 0.0);
      for (std::size_t k = 0; k < i; ++k)
        rhs -= l(i, k) * y(k, col);
      y(i, col) = rhs / l(i, i);
    }
  }
  CMatrix x(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t ii = n; ii-- > 0;) {
      complex_t rhs = y(ii, col);
      for (std::size_t k = ii + 1; k < n; ++k)
        rhs -= std::conj(l(k, ii)) * x(k, col);
      x(ii, col) = rhs / std::conj(l(ii, ii));
    }
  }
  return x;
}

// Solve the dense symmetric positive definite system M z = r in place.
bool solve_spd(std::vector<double> &m, rvector_t &r) {
  const std::size_t n = r.size();
  const lapack_int info_f = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L',
                                           static_cast<lapack_int>(n), m.data(),
                                           static_cast<lapack_int>(n));
  if (info_f != 0)
    return false;
  const lapack_int info_s = LAPACKE_dpotrs(
      LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n), 1, m.data(),
      static_cast<lapack_int>(n), r.data(), static_cast<lapack_int>(n));
  return info_s == 0;
}

// Largest alpha in (0, 1] with X + alpha * dX >= 0, given the Cholesky
// factor of X: alpha = -1/lambda_min(L^{-1} dX L^{-dag}) when negative.
double max_step(const CMatrix &l, const CMatrix &dx) {
  const std::size_t n = l.rows();
  // W = L^{-1} dX L^{-dag} via two triangular solves.
  CMatrix t(n, n); // L^{-1} dX
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      complex_t rhs = dx(i, col);
      for (std::size_t k = 0; k < i; ++k)
        rhs -= l(i, k) * t(k, col);
      t(i, col) = rhs / l(i, i);
    }
  // W^dag = L^{-1} T^dag, then W = (that)^dag; compute directly.
  CMatrix td = t.adjoint();
  CMatrix w(n, n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      complex_t rhs = td(i, col);
      for (std::size_t k = 0; k < i; ++k)
        rhs -= l(i, k) * w(k, col);
      w(i, col) = rhs / l(i, i);
    }
  w = w.adjoint();
  const double tol = 1e-7 * std::max(1.0, w.frobenius_norm());
  const double lmin = herm_eig((w + w.adjoint()) * complex_t(0.5, 0.0), tol)
                          .eigenvalues.front();
  if (lmin >= 0.0)
    return 1.0;
  return std::min(1.0, -1.0 / lmin);
}

} // namespace

/*******************************************************************************
 *
 * Interior-point solver
 *
 ******************************************************************************/

SdpSolution solve_sdp(const SdpProblem &prob, const SdpOptions &opts) {
  const std::size_t m = prob.a.size();
  const std::size_t nblk = prob.block_dims.size();
  const double n_total = double(prob.c.total_dim());
  if (prob.b.size() != m)
    throw std::invalid_argument("solve_sdp: b length must match constraint count");

  double a_scale = 1.0;
  for (const auto &ak : prob.a)
    a_scale = std::max(a_scale, ak.frobenius_norm());
  double b_norm = 0.0;
  for (double bk : prob.b)
    b_norm += bk * bk;
  b_norm = std::sqrt(b_norm);

  SdpSolution sol;
  const double x0 = std::max(10.0, b_norm);
  const double s0 = std::max(10.0, prob.c.frobenius_norm());
  sol.x = BlockMatrix::identity(prob.block_dims, x0);
  sol.s = BlockMatrix::identity(prob.block_dims, s0);
  sol.y.assign(m, 0.0);

  auto apply_a = [&](const BlockMatrix &x) {
    rvector_t out(m);
    for (std::size_t k = 0; k < m; ++k)
      out[k] = prob.a[k].inner(x);
    return out;
  };
  auto apply_at = [&](const rvector_t &y) {
    BlockMatrix out = BlockMatrix::zeros(prob.block_dims);
    for (std::size_t k = 0; k < m; ++k) {
      if (y[k] == 0.0)
        continue;
      for (std::size_t blk = 0; blk < nblk; ++blk) {
        CMatrix scaled = prob.a[k].blocks[blk];
        scaled *= complex_t(y[k], 0.0);
        out.blocks[blk] += scaled;
      }
    }
    return out;
  };

  std::vector<CMatrix> lx(nblk), ls(nblk), s_inv(nblk);

  for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
    sol.iterations = iter;

    // Residuals and convergence metrics.
    rvector_t rp = prob.b;
    {
      const rvector_t ax = apply_a(sol.x);
      for (std::size_t k = 0; k < m; ++k)
        rp[k] -= ax[k];
    }
    BlockMatrix rd = prob.c;
    rd -= sol.s;
    {
      const BlockMatrix aty = apply_at(sol.y);
      rd -= aty;
    }
    double rp_norm = 0.0;
    for (double v : rp)
      rp_norm += v * v;
    rp_norm = std::sqrt(rp_norm);

    sol.primal_obj = prob.c.inner(sol.x);
    sol.dual_obj = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      sol.dual_obj += prob.b[k] * sol.y[k];
    const double mu = sol.x.inner(sol.s) / n_total;
    sol.rel_gap = std::abs(sol.primal_obj - sol.dual_obj) /
                  (1.0 + std::abs(sol.primal_obj) + std::abs(sol.dual_obj));
    sol.primal_residual = rp_norm / (1.0 + b_norm);
    sol.dual_residual = rd.frobenius_norm() / (1.0 + prob.c.frobenius_norm());

    if (sol.rel_gap <= opts.gap_tol && sol.primal_residual <= opts.feas_tol &&
        sol.dual_residual <= opts.feas_tol &&
        mu <= opts.gap_tol * (1.0 + std::abs(sol.primal_obj))) {
      sol.converged = true;
      return sol;
    }

    // Factorize the current iterates.
    bool ok = true;
    for (std::size_t blk = 0; blk < nblk; ++blk) {
      ok = ok && cholesky(sol.x.blocks[blk], lx[blk]);
      ok = ok && cholesky(sol.s.blocks[blk], ls[blk]);
      if (ok)
        s_inv[blk] = inverse_from_cholesky(ls[blk]);
    }
    if (!ok)
      return sol; // numerical breakdown: report best iterate

    // Schur complement M_kl = Re<A_k, X A_l S^{-1}>.
    std::vector<std::vector<CMatrix>> t(m);
    for (std::size_t k = 0; k < m; ++k) {
      t[k].resize(nblk);
      for (std::size_t blk = 0; blk < nblk; ++blk)
        t[k][blk] = sol.x.blocks[blk] * prob.a[k].blocks[blk] * s_inv[blk];
    }
    std::vector<double> schur(m * m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) {
        double acc = 0.0;
        for (std::size_t blk = 0; blk < nblk; ++blk)
          acc += hs_inner(prob.a[k].blocks[blk], t[l][blk]).real();
        schur[k + l * m] = acc;
      }
    // Symmetrize (exact for points on the central path).
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = k + 1; l < m; ++l) {
        const double avg = 0.5 * (schur[k + l * m] + schur[l + k * m]);
        schur[k + l * m] = schur[l + k * m] = avg;
      }
    // Tiny ridge keeps the factorization alive near convergence.
    double diag_max = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      diag_max = std::max(diag_max, schur[k + k * m]);
    for (std::size_t k = 0; k < m; ++k)
      schur[k + k * m] += 1e-14 * std::max(1.0, diag_max);

    // One Newton solve for a given complementarity target R_c.
    auto newton = [&](const BlockMatrix &rc, rvector_t &dy, BlockMatrix &dxm,
                      BlockMatrix &dsm) -> bool {
      // rhs_k = rp_k - <A_k, (R_c - X R_d) S^{-1}>
      rvector_t rhs = rp;
      for (std::size_t k = 0; k < m; ++k) {
        double acc = 0.0;
        for (std::size_t blk = 0; blk < nblk; ++blk) {
          const CMatrix inner_term =
              (rc.blocks[blk] - sol.x.blocks[blk] * rd.blocks[blk]) *
              s_inv[blk];
          acc += hs_inner(prob.a[k].blocks[blk], inner_term).real();
        }
        rhs[k] -= acc;
      }
      std::vector<double> mcopy = schur;
      dy = rhs;
      if (!solve_spd(mcopy, dy))
        return false;
      dsm = rd;
      {
        const BlockMatrix atdy = apply_at(dy);
        dsm -= atdy;
      }
      dxm = BlockMatrix::zeros(prob.block_dims);
      for (std::size_t blk = 0; blk < nblk; ++blk) {
        CMatrix raw =
            (rc.blocks[blk] - sol.x.blocks[blk] * dsm.blocks[blk]) * s_inv[blk];
        dxm.blocks[blk] = (raw + raw.adjoint()) * complex_t(0.5, 0.0);
      }
      return true;
    };

    // Predictor (affine scaling, sigma = 0): R_c = -X S.
    BlockMatrix rc = BlockMatrix::zeros(prob.block_dims);
    for (std::size_t blk = 0; blk < nblk; ++blk)
      rc.blocks[blk] = -(sol.x.blocks[blk] * sol.s.blocks[blk]);
    rvector_t dy_aff;
    BlockMatrix dx_aff, ds_aff;
    if (!newton(rc, dy_aff, dx_aff, ds_aff))
      return sol;

    double ap = 1.0, ad = 1.0;
    for (std::size_t blk = 0; blk < nblk; ++blk) {
      ap = std::min(ap, max_step(lx[blk], dx_aff.blocks[blk]));
      ad = std::min(ad, max_step(ls[blk], ds_aff.blocks[blk]));
    }
    ap = std::min(1.0, opts.step_fraction * ap);
    ad = std::min(1.0, opts.step_fraction * ad);

    double mu_aff = 0.0;
    {
      BlockMatrix xa = sol.x, sa = sol.s;
      for (std::size_t blk = 0; blk < nblk; ++blk) {
        xa.blocks[blk] += dx_aff.blocks[blk] * complex_t(ap, 0.0);
        sa.blocks[blk] += ds_aff.blocks[blk] * complex_t(ad, 0.0);
      }
      mu_aff = xa.inner(sa) / n_total;
    }
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector: R_c = sigma mu I - X S - dX_aff dS_aff.
    for (std::size_t blk = 0; blk < nblk; ++blk) {
      CMatrix corr = dx_aff.blocks[blk] * ds_aff.blocks[blk];
      rc.blocks[blk] -= corr;
      rc.blocks[blk] +=
          CMatrix::identity(prob.block_dims[blk]) * complex_t(sigma * mu, 0.0);
    }
    rvector_t dy;
    BlockMatrix dx, ds;
    if (!newton(rc, dy, dx, ds))
      return sol;

    ap = 1.0;
    ad = 1.0;
    for (std::size_t blk = 0; blk < nblk; ++blk) {
      ap = std::min(ap, max_step(lx[blk], dx.blocks[blk]));
      ad = std::min(ad, max_step(ls[blk], ds.blocks[blk]));
    }
    ap = std::min(1.0, opts.step_fraction * ap);
    ad = std::min(1.0, opts.step_fraction * ad);
    if (ap < 1e-12 && ad < 1e-12)
      return sol; // stalled

    for (std::size_t blk = 0; blk < nblk; ++blk) {
      sol.x.blocks[blk] += dx.blocks[blk] * complex_t(ap, 0.0);
      sol.s.blocks[blk] += ds.blocks[blk] * complex_t(ad, 0.0);
    }
    for (std::size_t k = 0; k < m; ++k)
      sol.y[k] += ad * dy[k];
  }
  return sol;
}

} // namespace superchan::sdp
