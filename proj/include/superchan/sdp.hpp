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
 * @file    sdp.hpp
 * @brief   Small dense semidefinite programming solver over Hermitian
 *          block matrices (primal-dual interior point, HKM search
 *          direction with Mehrotra predictor-corrector). Solver backend
 *          for the diamond-norm module; problems here have a handful of
 *          blocks of dimension <= 16 and O(10^2) constraints.
 *
 * Standard form:
 *   (P)  min <C, X>   s.t.  <A_k, X> = b_k (k = 1..m),  X >= 0
 *   (D)  max b^T y    s.t.  S = C - sum_k y_k A_k >= 0
 * with X, S, C, A_k block-diagonal Hermitian and <.,.> the real
 * Hilbert-Schmidt inner product.
 */

#ifndef SUPERCHAN_SDP_HPP_
#define SUPERCHAN_SDP_HPP_

#include "cmatrix.hpp"

namespace superchan::sdp {

/// Block-diagonal Hermitian matrix (blocks stored dense).
struct BlockMatrix {
  std::vector<CMatrix> blocks;

  static BlockMatrix zeros(const std::vector<std::size_t> &dims);
  static BlockMatrix identity(const std::vector<std::size_t> &dims,
                              double scale = 1.0);

  BlockMatrix &operator+=(const BlockMatrix &o);
  BlockMatrix &operator-=(const BlockMatrix &o);
  BlockMatrix &operator*=(double s);
  double inner(const BlockMatrix &o) const; // Re sum_b Tr[b^dag o_b]
  double frobenius_norm() const;
  std::size_t total_dim() const;
};

struct SdpProblem {
  std::vector<std::size_t> block_dims;
  BlockMatrix c;
  std::vector<BlockMatrix> a;
  rvector_t b;
};

struct SdpOptions {
  double gap_tol = 1e-9;   // relative duality gap
  double feas_tol = 1e-10; // relative primal/dual feasibility
  std::size_t max_iterations = 200;
  double step_fraction = 0.98;
};

struct SdpSolution {
  BlockMatrix x; // primal, strictly feasible cone-wise
  rvector_t y;   // dual
  BlockMatrix s; // dual slack
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double rel_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

SdpSolution solve_sdp(const SdpProblem &prob, const SdpOptions &opts = {});

} // namespace superchan::sdp

#endif
