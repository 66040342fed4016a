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
 * @file    channels.hpp
 * @brief   Choi-matrix representation of quantum channels, CP/TP checks,
 *          channel application, single-qubit states and the gate library.
 *
 * Conventions, fixed globally:
 *   - Choi index ordering is input (x) output:
 *       Lambda_E = sum_ij |i><j| (x) E(|i><j|).
 *   - Computational basis |0> = |H>, |1> = |V>;
 *     |D/A> = (|H> +- |V>)/sqrt2, |R/L> = (|H> +- i|V>)/sqrt2.
 */

#ifndef SUPERCHAN_CHANNELS_HPP_
#define SUPERCHAN_CHANNELS_HPP_

#include <functional>
#include <string>

#include "cmatrix.hpp"

namespace superchan {

/*******************************************************************************
 *
 * DensityMatrix class
 *
 ******************************************************************************/

/**
 * Unit-trace PSD operator. The constructor validates Hermiticity (1e-10),
 * positivity (min eigenvalue >= -1e-8) and unit trace (1e-8), then stores
 * the symmetrized matrix.
 */
class DensityMatrix {
public:
  explicit DensityMatrix(const CMatrix &mat);

  /// Rank-1 state |ket><ket| from a normalized column vector.
  static DensityMatrix pure(const CMatrix &ket);

  std::size_t dim() const { return mat_.rows(); }
  const CMatrix &mat() const { return mat_; }

  /// Tr[rho^2]; 1 for pure states.
  double purity() const;
  bool is_pure(double tol = 1e-8) const { return purity() >= 1.0 - tol; }

private:
  CMatrix mat_;
};

/*******************************************************************************
 *
 * Channel class
 *
 ******************************************************************************/

/**
 * CP map between operator spaces stored as a Choi matrix. Hermiticity and
 * dimensions are enforced at construction; CP and TP are checkable flags
 * only, since linear-inversion estimates may violate them.
 */
struct Channel {
  CMatrix choi;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;

  Channel() = default;
  Channel(CMatrix choi_in, std::size_t d_in, std::size_t d_out);
};

/// Assemble the Choi matrix from the images E(|i><j|) of all basis units.
Channel choi_from_map_action(
    const std::function<CMatrix(std::size_t, std::size_t)> &action,
    std::size_t d_in, std::size_t d_out);

/// Rank-1 Choi matrix |u>><<u| of a unitary conjugation. Throws when u is
/// not unitary within 1e-10.
Channel choi_from_unitary(const CMatrix &u);

/// E(rho) = Tr_1[(rho^T (x) 1) Lambda_E].
CMatrix apply_channel(const Channel &ch, const CMatrix &rho);
CMatrix apply_channel(const Channel &ch, const DensityMatrix &rho);

bool is_cp(const Channel &ch, double tol = 1e-8);
bool is_tp(const Channel &ch, double tol = 1e-8);

/*******************************************************************************
 *
 * Polarization states
 *
 ******************************************************************************/

enum class StateLabel { H, V, D, A, R, L };

/// All six labels in canonical order {H, V, D, A, R, L}.
const std::vector<StateLabel> &six_state_labels();

/// Orthogonal partner: H<->V, D<->A, R<->L.
StateLabel complement_label(StateLabel s);

CMatrix state_ket(StateLabel s);
DensityMatrix state_density(StateLabel s);

std::string to_string(StateLabel s);
StateLabel state_from_string(const std::string &name);

/*******************************************************************************
 *
 * Gate library
 *
 ******************************************************************************/

enum class Gate { Z, H, RY, CZ };

/**
 * Fixed gates: Z = diag(1,-1); H the Hadamard; RY the rotation about
 * sigma_y whose angle is pinned by the identity H = RY * Z * RY^dagger;
 * CZ = diag(1,1,1,-1) in the H/V (x) H/V product basis.
 */
CMatrix gate(Gate g);
CMatrix gate(const std::string &name);

/// Standard three-angle single-qubit unitary.
CMatrix gate_generic(double theta, double phi, double lambda);

} // namespace superchan

#endif
