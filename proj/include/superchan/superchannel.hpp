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
 * @file    superchannel.hpp
 * @brief   Superchannels: CP maps taking a preparation procedure's Choi
 *          matrix to the system output state. Construction from an initial
 *          system-environment state and interaction, effective channels
 *          conditioned on an initial projection, and preparation-fidelity
 *          optimization over the Bloch sphere.
 *
 * Slot semantics of the d^3-dimensional Choi matrix: X1 is the
 * pre-preparation (projection) slot, X2 the prepared-state slot, X3 the
 * output slot. The defining contraction (system dimension d, environment
 * dimension dE) is
 *
 *   (L_M)_{i1 i2 i3; j1 j2 j3}
 *     = sum_{n,m,l} (rho_SE)_{i1 n; j1 m} (L_U)_{i2 n i3 l; j2 m j3 l}
 *
 * with L_U the interaction Choi matrix on (S in, E in, S out, E out), and
 * application is rho' = Tr_{12}[(L_P^T (x) 1) L_M]. Both are pinned by the
 * behavioral contract: for every preparation P the output must equal
 * Tr_E[U((P (x) 1)(rho_SE))].
 */

#ifndef SUPERCHAN_SUPERCHANNEL_HPP_
#define SUPERCHAN_SUPERCHANNEL_HPP_

#include <optional>
#include <vector>

#include "channels.hpp"

namespace superchan {

/*******************************************************************************
 *
 * Superchannel and Preparation classes
 *
 ******************************************************************************/

/**
 * Choi matrix on X1 (x) X2 (x) X3. Hermiticity is enforced at
 * construction; positivity and the trace-d normalization are checkable
 * (raw linear-inversion reconstructions may violate them).
 */
class Superchannel {
public:
  Superchannel(CMatrix choi, std::size_t d);

  std::size_t d() const { return d_; }
  const CMatrix &choi() const { return choi_; }

  double trace() const { return choi_.trace().real(); }
  double min_eig() const { return min_eigenvalue(choi_); }
  bool is_cp(double tol = 1e-8) const { return min_eig() >= -tol; }

private:
  CMatrix choi_;
  std::size_t d_;
};

/**
 * Choi matrix of a system preparation procedure on X1 (x) X2. Projective
 * preparations (post-select on rho_i, rotate to rho_j) have
 * choi = conj(rho_i) (x) rho_j and keep the two factors around for the
 * ground-truth simulator.
 */
class Preparation {
public:
  enum class Kind { Projective, General };

  /// General preparation from a PSD Hermitian Choi matrix on X1 (x) X2.
  Preparation(CMatrix choi, std::size_t d);

  Kind kind() const { return kind_; }
  std::size_t d() const { return d_; }
  const CMatrix &choi() const { return choi_; }

  /// Projection / rotated state of a projective preparation.
  const CMatrix &rho_i() const;
  const CMatrix &rho_j() const;

private:
  friend Preparation projective_preparation(const DensityMatrix &,
                                            const DensityMatrix &);
  CMatrix choi_;
  std::size_t d_;
  Kind kind_ = Kind::General;
  std::optional<CMatrix> rho_i_, rho_j_;
};

/// Projective preparation with Choi conj(rho_i) (x) rho_j. Both states
/// must be pure within 1e-8.
Preparation projective_preparation(const DensityMatrix &rho_i,
                                   const DensityMatrix &rho_j);

/*******************************************************************************
 *
 * Construction and application
 *
 ******************************************************************************/

/**
 * Build the superchannel from an initial SE state and the SE interaction
 * (as a Choi matrix on the joint space). The environment dimension is
 * rho_se.dim / d_sys. Throws for non-CP interactions.
 */
Superchannel build_superchannel(const DensityMatrix &rho_se,
                                const Channel &u_se, std::size_t d_sys = 2);

/// rho' = Tr_{12}[(L_P^T (x) 1) L_M]; trace equals the preparation success
/// probability (subnormalized output).
CMatrix apply_superchannel(const Superchannel &m, const Preparation &p);

/// rho_S,av = Tr_{23}[L_M]/d.
DensityMatrix average_initial_state(const Superchannel &m);

/// L_E,av = Tr_1[L_M], the channel averaged over initial projections.
Channel average_effective_map(const Superchannel &m);

/// L_Ms = rho_S,av (x) L_E,av, the separable reference.
Superchannel separable_superchannel(const Superchannel &m);

struct EffectiveChannel {
  Channel channel;
  double success_prob = 0.0;
};

/**
 * Effective channel conditioned on an initial projection onto rho1:
 * L = Tr_1[(rho1 (x) 1_23) L_M] / p with p = Tr[...]/d. Throws when the
 * post-selection probability is below 1e-9.
 */
EffectiveChannel effective_channel(const Superchannel &m,
                                   const DensityMatrix &rho1);

/// F_prep(M, rho1, U) = F(L_{E_rho1}, L_U) / d^2, in [0, 1].
double prep_fidelity(const Superchannel &m, const DensityMatrix &rho1,
                     const CMatrix &u_target);

/// Residual of the TP condition ||Tr_X3[L_M] - Tr_E[rho_SE] (x) 1||_F;
/// vanishes for trace-preserving interactions.
double check_tp_condition(const Superchannel &m, const DensityMatrix &rho_se);

/*******************************************************************************
 *
 * Preparation-fidelity optimization
 *
 ******************************************************************************/

enum class OptMode { Max, Min };

struct PrepSurfacePoint {
  double theta = 0.0;
  double phi = 0.0;
  double f = 0.0;
  bool skipped = false; // post-selection probability below threshold
};

struct PrepOptimum {
  double theta = 0.0;
  double phi = 0.0;
  double f = 0.0;
  std::vector<PrepSurfacePoint> surface; // 64 x 128 grid in row-major order
  std::size_t skipped_points = 0;
};

/// Projection state cos(theta)|H> + e^{i phi} sin(theta)|V>.
DensityMatrix bloch_projection_state(double theta, double phi);

/**
 * Globally optimize F_prep over the Bloch sphere of the initial
 * projection: a 64 x 128 grid over theta in [0, pi/2], phi in [0, 2pi)
 * followed by Nelder-Mead refinement to 1e-4 in f. Deterministic; grid
 * points with vanishing post-selection probability are skipped and
 * counted.
 */
PrepOptimum optimize_prep(const Superchannel &m, const CMatrix &u_target,
                          OptMode mode);

} // namespace superchan

#endif
