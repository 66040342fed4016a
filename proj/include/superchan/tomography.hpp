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
 * @file    tomography.hpp
 * @brief   Superchannel tomography: the projector frame and measurement
 *          model, weighted linear inversion with dual frames, hedged
 *          probabilities, and maximum-likelihood reconstruction as a
 *          PSD-constrained least-squares program with a certified
 *          optimality gap.
 */

#ifndef SUPERCHAN_TOMOGRAPHY_HPP_
#define SUPERCHAN_TOMOGRAPHY_HPP_

#include <array>
#include <cstdint>

#include "superchannel.hpp"

namespace superchan {

/*******************************************************************************
 *
 * Frame
 *
 ******************************************************************************/

/**
 * The informationally complete projector frame
 * Pi_ijk = rho_i (x) conj(rho_j) (x) rho_k over triples of pure states, in
 * lexicographic (i,j,k) order. op_rank is the rank of the frame operator
 * sum |Pi>><<Pi| (64 = full superchannel space for qubits).
 */
struct Frame {
  std::vector<CMatrix> projectors;
  std::vector<std::array<StateLabel, 3>> labels;
  std::vector<StateLabel> states;
  std::size_t d = 2;
  std::size_t op_rank = 0;

  std::size_t full_rank() const { return d * d * d * d * d * d; }
  bool informationally_complete() const { return op_rank == full_rank(); }
};

/// All |states|^3 projectors from the given pure states (rank deficiency is
/// reported via op_rank, not fatal).
Frame build_frame(const std::vector<StateLabel> &states);

/// The 216-projector frame over {H,V,D,A,R,L}.
Frame build_default_frame();

/// p_ijk = <<Pi_ijk | L_M>>, clamped into [0,1] within 1e-10 slack.
rvector_t probabilities(const Superchannel &m, const Frame &frame);

/*******************************************************************************
 *
 * Count data
 *
 ******************************************************************************/

struct CountRecord {
  StateLabel i, j, k;
  double n = 0.0;          // counts; real-valued for exact datasets
  double trials = 0.0;     // N_ijk
  bool trials_known = true;
};

struct CountDataset {
  std::vector<CountRecord> records;
  double beta = 0.1;          // hedging parameter
  std::size_t outcomes_k = 4; // K: true-measurement outcomes per config
  std::vector<StateLabel> frame_states = six_state_labels();
  bool exact = false; // counts are exact N0*p values, not samples
};

/// Hedged probabilities (n + beta)/(N + K beta), strictly inside (0,1).
rvector_t hedge(const CountDataset &ds);

/// Raw frequencies n/N without hedging (exact datasets).
rvector_t raw_frequencies(const CountDataset &ds);

/// Binomial normal-approximation weights w = sqrt(N/(p(1-p))). Requires
/// p strictly inside (0,1); hedge first.
rvector_t weights(const CountDataset &ds, const rvector_t &p);

/**
 * Fill in unknown trial counts by totalling observed counts over the four
 * outcomes {rho_i, rho_ibar} x {rho_k, rho_kbar} at fixed j (the rotated
 * index is not a measurement). Records with known trials pass through
 * unchanged; missing complement configurations are an error.
 */
CountDataset estimate_trials(const CountDataset &ds, const Frame &frame);

/*******************************************************************************
 *
 * Reconstruction
 *
 ******************************************************************************/

enum class ReconstructionMethod { Linear, Mle };

struct ReconstructionDiagnostics {
  double min_eig_pre_projection = 0.0; // of the raw linear estimate
  std::size_t iterations = 0;
  double kkt_residual = 0.0; // relative optimality gap certificate
  bool converged = true;
};

struct ReconstructionResult {
  Superchannel superchannel;
  double objective = 0.0; // weighted 2-norm residual ||W(S|L>> - p)||_2
  ReconstructionMethod method = ReconstructionMethod::Linear;
  ReconstructionDiagnostics diagnostics;
};

/**
 * Exact minimizer of ||W(S |L>> - p)||_2 via the normal equations;
 * Hermiticity enforced by symmetrization, deliberately NOT projected to
 * PSD. With uniform weights the dual-frame expansion L = sum p_b D_b is
 * used; both routes agree. Throws on a rank-deficient frame.
 */
ReconstructionResult linear_inversion(const rvector_t &p, const Frame &frame,
                                      const rvector_t &w);

/// Dual set |D_b>> = (sum |Pi>><<Pi|)^+ |Pi_b>> (uniform weights).
std::vector<CMatrix> dual_frame(const Frame &frame);

struct MleOptions {
  double tol = 1e-6;             // relative optimality-gap target
  std::size_t max_iterations = 200000;
  bool throw_on_failure = false; // else return best iterate, converged=false
};

/**
 * Hedged maximum-likelihood reconstruction: minimize the weighted 2-norm
 * residual over {L >= 0, Tr L = d} by accelerated projected gradient with
 * exact spectral projection. Optimality is certified by the convex duality
 * gap <G,L> - d lambda_min(G) of the gradient G at the iterate. For exact
 * datasets the raw probabilities are used with uniform weights (hedging a
 * noiseless dataset would bias it).
 */
ReconstructionResult mle_reconstruct(const CountDataset &ds, const Frame &frame,
                                     const MleOptions &opts = {});

} // namespace superchan

#endif
