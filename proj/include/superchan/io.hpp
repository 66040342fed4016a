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
 * @file    io.hpp
 * @brief   File formats: JSON (de)serialization for matrices, channels,
 *          superchannels, datasets and results; CSV for count data,
 *          probabilities, fidelity surfaces and sweeps. Doubles round-trip
 *          bit-exactly through both formats.
 */

#ifndef SUPERCHAN_IO_HPP_
#define SUPERCHAN_IO_HPP_

#include <string>

#include <json.hpp>

#include "simulator.hpp"

namespace superchan {

using json = nlohmann::json;

/*******************************************************************************
 *
 * JSON formats
 *
 ******************************************************************************/

// CMatrix: {rows, cols, re: [...], im: [...]}, row-major.
json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const json &j);

// Channel: {dim_in, dim_out, choi}.
json channel_to_json(const Channel &ch);
Channel channel_from_json(const json &j);

// Superchannel: {d, choi, slots: ["X1","X2","X3"]}.
json superchannel_to_json(const Superchannel &m);
Superchannel superchannel_from_json(const json &j);

// CountDataset: {beta, K, exact, frame_states, records: [{i,j,k,n,N}]}.
json dataset_to_json(const CountDataset &ds);
CountDataset dataset_from_json(const json &j);

json reconstruction_to_json(const ReconstructionResult &r);

// ExperimentSpec: {theta | tau, v, interaction, frame_states, n0, seed,
// exact, cz_control_on_h}; missing fields keep their defaults.
ExperimentSpec experiment_spec_from_json(const json &j);
json experiment_spec_to_json(const ExperimentSpec &spec);

/*******************************************************************************
 *
 * CSV formats
 *
 ******************************************************************************/

/// Header "i,j,k,n,N". Counts/trials printed with full precision; an empty
/// N column marks unknown trials.
std::string dataset_to_csv(const CountDataset &ds);
CountDataset dataset_from_csv(const std::string &text);

/// Header "i,j,k,p" with the exact probabilities of a configuration list.
std::string probabilities_to_csv(const CountDataset &ds, const rvector_t &p);

/// Header "theta,phi,f" in grid order; skipped points emit "nan".
std::string surface_to_csv(const std::vector<PrepSurfacePoint> &surface);

/// Header "tau,target,ic_norm".
std::string sweep_to_csv(const std::vector<SweepRow> &rows);

/*******************************************************************************
 *
 * File helpers
 *
 ******************************************************************************/

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);
json read_json(const std::string &path);
void write_json(const std::string &path, const json &j);

/*******************************************************************************
 *
 * Console view
 *
 ******************************************************************************/

/**
 * Superchannel matrix re-expressed in the compound polarization-Pauli
 * basis {|H>,|V>} (x) {I, sx, sy, sz} (X1 in polarization, X2 (x) X3 in
 * normalized Pauli operators): a unitary change of basis used for
 * human-readable printing only.
 */
CMatrix to_polarization_pauli_basis(const Superchannel &m);
std::string format_matrix(const CMatrix &m, int precision = 4);

} // namespace superchan

#endif
