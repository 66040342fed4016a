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
 * @file    diamond.hpp
 * @brief   Diamond norm (completely bounded trace norm) of
 *          Hermiticity-preserving maps via a certified semidefinite
 *          program, and the initial-correlation norm built on it.
 *
 * For a Hermitian Choi matrix J on input (x) output the two sides are
 *
 *   primal:  max  ||(sqrt(rho) (x) 1) J (sqrt(rho) (x) 1)||_1
 *            over density matrices rho on the input space
 *   dual:    min  ||Tr_out(Y)||_inf   s.t.  Y >= J, Y >= -J.
 *
 * The solver returns a feasible pair; the reported value carries a
 * certificate dual - primal <= tol, and the primal witness (input state,
 * two-outcome measurement) reproduces the lower bound when re-evaluated.
 */

#ifndef SUPERCHAN_DIAMOND_HPP_
#define SUPERCHAN_DIAMOND_HPP_

#include "superchannel.hpp"

namespace superchan {

/*******************************************************************************
 *
 * Hermiticity-preserving maps
 *
 ******************************************************************************/

/// A map with Hermitian Choi matrix, typically a difference of two CP maps
/// (and therefore possibly indefinite).
struct HermitianPreservingMap {
  CMatrix choi;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;

  HermitianPreservingMap(CMatrix choi_in, std::size_t d_in, std::size_t d_out);
};

/*******************************************************************************
 *
 * Diamond norm
 *
 ******************************************************************************/

struct DiamondCertificate {
  double primal = 0.0; // feasible lower bound (witness value)
  double dual = 0.0;   // feasible upper bound
};

struct DiamondWitness {
  CMatrix input_state;        // optimal averaged input rho on the input space
  CMatrix measurement_effect; // projector P+ of the optimal two-outcome test
  double achieved = 0.0;      // value reproduced by (state, measurement)
};

struct DiamondResult {
  double value = 0.0;
  DiamondCertificate certificate;
  DiamondWitness witness;
  std::size_t iterations = 0;
};

/**
 * Certified diamond norm: dual feasible upper bound minus primal feasible
 * lower bound <= tol, both bounds validated outside the interior-point
 * iteration. Throws solver_error (with the achieved gap) when the
 * certificate cannot be met.
 */
DiamondResult diamond_norm(const HermitianPreservingMap &phi,
                           double tol = 1e-6);

/// Optimal single-shot discrimination probability (1 + ||phi||_dia / 2)/2.
double distinguish_probability(const HermitianPreservingMap &phi,
                               double tol = 1e-6);

/*******************************************************************************
 *
 * Initial-correlation norm
 *
 ******************************************************************************/

struct IcNormResult {
  double value = 0.0;
  DiamondResult diamond; // of M - Ms as a map L(X1 (x) X2) -> L(X3)
  // Whether the optimal witness input is itself a valid preparation Choi
  // (PSD, unit trace, trace-non-increasing as a map X1 -> X2). Reported,
  // not guaranteed.
  bool witness_is_valid_preparation = false;
};

/**
 * The difference of two superchannels as a Hermiticity-preserving map
 * L(X1 (x) X2) -> L(X3), scaled by d so that inputs carry the
 * preparation-procedure normalization (deterministic preparations have
 * trace-d Choi matrices). This is the map whose discrimination
 * probability the IC-norm reports.
 */
HermitianPreservingMap superchannel_difference_map(const Superchannel &a,
                                                   const Superchannel &b);

/// ||M||_IC = ||M - M_s||_dia / 2 over preparation-normalized inputs,
/// in [0, 1]; zero iff the separable reference reproduces M.
double ic_norm(const Superchannel &m, double tol = 1e-6);
IcNormResult ic_norm_detailed(const Superchannel &m, double tol = 1e-6);

} // namespace superchan

#endif
