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
 * @file    simulator.hpp
 * @brief   Ground-truth physics for the simulated experiments: the
 *          entangled system-environment family, the CZ-mediated
 *          interactions, exact conditional evolution, Poissonian count
 *          sampling and the ideal IC-norm sweep.
 */

#ifndef SUPERCHAN_SIMULATOR_HPP_
#define SUPERCHAN_SIMULATOR_HPP_

#include <cstdint>

#include "superchannel.hpp"
#include "tomography.hpp"

namespace superchan {

/*******************************************************************************
 *
 * Experiment specification
 *
 ******************************************************************************/

enum class InteractionTarget { Z, H, RYZ };

std::string to_string(InteractionTarget t);
InteractionTarget interaction_from_string(const std::string &name);

struct ExperimentSpec {
  double theta = 0.0;          // SE state parameter; tangle = sin^2(4 theta)
  double state_purity_v = 1.0; // white-noise mixing weight, 1 = pure
  InteractionTarget interaction = InteractionTarget::Z;
  std::vector<StateLabel> frame_states = six_state_labels();
  std::uint64_t trials_per_config = 5000;
  std::uint64_t seed = 0;
  bool exact = false;           // store n = N0 * p instead of sampling
  bool cz_control_on_h = false; // flipped CZ control convention
};

/*******************************************************************************
 *
 * State family and interactions
 *
 ******************************************************************************/

/**
 * rho = v |psi(theta)><psi(theta)| + (1-v) I/4 with
 * |psi(theta)> = cos(2 theta)|HV> + sin(2 theta)|VH>.
 */
DensityMatrix make_se_state(double theta, double v);

/// tau = sin^2(4 theta).
double tangle(double theta);

/// Inverse of tangle on the branch theta in [0, pi/8].
double theta_for_tangle(double tau);

/**
 * 4x4 system (x) environment unitary realizing the target via a CZ
 * coupling: Z-target U = CZ, H-target U = (R (x) 1) CZ (R^dag (x) 1),
 * RYZ-target U = (R (x) 1) CZ, with R the RY gate. By default the
 * environment state |V> activates the Z; cz_control_on_h flips this.
 */
CMatrix interaction_unitary(InteractionTarget target,
                            bool cz_control_on_h = false);

/*******************************************************************************
 *
 * Ground truth and sampling
 *
 ******************************************************************************/

/**
 * Exact conditional evolution for a projective preparation: post-select on
 * rho_i (probability p_i), rotate the system to rho_j, evolve jointly with
 * the unitary u and trace out the environment. Returns the subnormalized
 * output with trace p_i; the zero matrix when the projection never
 * succeeds. This is the oracle the superchannel contraction is judged
 * against.
 */
CMatrix ground_truth_output(const DensityMatrix &rho_se, const CMatrix &u,
                            const Preparation &prep);

/**
 * Simulate a tomography run: exact probabilities from the ground truth for
 * every (i,j,k) in lexicographic frame order, then n ~ Poisson(N0 * p) per
 * configuration (or n = N0 * p exactly when spec.exact). Deterministic for
 * fixed seed.
 */
CountDataset simulate_counts(const ExperimentSpec &spec);

/// Exact probabilities in the same order as simulate_counts records.
rvector_t exact_probabilities(const ExperimentSpec &spec);

/// The true superchannel for a spec (build_superchannel of its state and
/// interaction).
Superchannel true_superchannel(const ExperimentSpec &spec);

/*******************************************************************************
 *
 * IC-norm sweep
 *
 ******************************************************************************/

struct SweepRow {
  double tau = 0.0;
  InteractionTarget target = InteractionTarget::Z;
  double ic_norm = 0.0;
};

/**
 * Ideal-case IC-norm curve: for each (tau, target) compose
 * make_se_state -> build_superchannel -> ic_norm analytically (no
 * sampling). Rows ordered by target then tau. Parallelizes over tasks; the
 * SUPERCHAN_THREADS environment variable caps the worker count.
 */
std::vector<SweepRow> fig4_sweep(const std::vector<InteractionTarget> &targets,
                                 const rvector_t &tau_grid, double v,
                                 double sdp_tol = 1e-5);

} // namespace superchan

#endif
