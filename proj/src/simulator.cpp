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

#include "superchan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include "superchan/diamond.hpp"

namespace superchan {

/*******************************************************************************
 *
 * Experiment specification
 *
 ******************************************************************************/

std::string to_string(InteractionTarget t) {
  switch (t) {
  case InteractionTarget::Z: return "Z";
  case InteractionTarget::H: return "H";
  case InteractionTarget::RYZ: return "RYZ";
  }
  throw std::invalid_argument("to_string: unknown interaction target");
}

InteractionTarget interaction_from_string(const std::string &name) {
  if (name == "Z") return InteractionTarget::Z;
  if (name == "H") return InteractionTarget::H;
  if (name == "RYZ") return InteractionTarget::RYZ;
  throw std::invalid_argument("interaction_from_string: unknown target '" +
                              name + "'");
}

/*******************************************************************************
 *
 * State family and interactions
 *
 ******************************************************************************/

DensityMatrix make_se_state(double theta, double v) {
  if (v < 0.0 || v > 1.0)
    throw std::invalid_argument("make_se_state: v must lie in [0,1]");
  const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  // |psi> = c |HV> + s |VH> in the S (x) E basis (HH, HV, VH, VV).
  CMatrix psi(4, 1, {0.0, c, s, 0.0});
  CMatrix rho = psi * psi.adjoint() * complex_t(v, 0.0);
  rho += CMatrix::identity(4) * complex_t((1.0 - v) / 4.0, 0.0);
  return DensityMatrix(rho);
}

double tangle(double theta) {
  const double s = std::sin(4.0 * theta);
  return s * s;
}

double theta_for_tangle(double tau) {
  if (tau < 0.0 || tau > 1.0)
    throw std::invalid_argument("theta_for_tangle: tau must lie in [0,1]");
  return std::asin(std::sqrt(tau)) / 4.0;
}

CMatrix interaction_unitary(InteractionTarget target, bool cz_control_on_h) {
  CMatrix cz = CMatrix::identity(4);
  if (cz_control_on_h)
    cz(2, 2) = -1.0; // |V>_S |H>_E picks up the phase
  else
    cz(3, 3) = -1.0; // |V>_S |V>_E
  const CMatrix r = gate(Gate::RY);
  const CMatrix id2 = CMatrix::identity(2);
  switch (target) {
  case InteractionTarget::Z:
    return cz;
  case InteractionTarget::H:
    return kron(r, id2) * cz * kron(r.adjoint(), id2);
  case InteractionTarget::RYZ:
    return kron(r, id2) * cz;
  }
  throw std::invalid_argument("interaction_unitary: unknown target");
}

/*******************************************************************************
 *
 * Ground truth and sampling
 *
 ******************************************************************************/

CMatrix ground_truth_output(const DensityMatrix &rho_se, const CMatrix &u,
                            const Preparation &prep) {
  if (prep.kind() != Preparation::Kind::Projective)
    throw std::invalid_argument("ground_truth_output: projective preparation required");
  const std::size_t d = prep.d();
  if (rho_se.dim() % d != 0)
    throw std::invalid_argument("ground_truth_output: dimension mismatch");
  const std::size_t de = rho_se.dim() / d;
  if (!u.is_square() || u.rows() != rho_se.dim())
    throw std::invalid_argument("ground_truth_output: unitary dimension mismatch");
  if ((u.adjoint() * u - CMatrix::identity(u.rows())).frobenius_norm() > 1e-10)
    throw std::invalid_argument("ground_truth_output: u is not unitary");

  // Unnormalized conditional environment state Tr_S[(rho_i (x) 1) rho_SE];
  // its trace is the post-selection probability, so the subnormalized
  // output needs no division (and the zero-probability case is automatic).
  const CMatrix proj = kron(prep.rho_i(), CMatrix::identity(de));
  const CMatrix cond_env =
      partial_trace(proj * rho_se.mat(), SubsystemShape{{d, de}}, {0});
  const CMatrix evolved = u * kron(prep.rho_j(), cond_env) * u.adjoint();
  return partial_trace(evolved, SubsystemShape{{d, de}}, {1});
}

namespace {

double uniform01(std::mt19937_64 &rng) {
  // 53-bit mantissa construction; identical streams on every platform.
  return double(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t poisson_draw(std::mt19937_64 &rng, double lambda) {
  if (lambda <= 0.0)
    return 0;
  // Count unit-rate exponential interarrivals; exact for any lambda and
  // cheap at the count rates used here.
  double acc = 0.0;
  std::uint64_t k = 0;
  while (true) {
    double u = uniform01(rng);
    if (u <= 0.0)
      u = 0x1.0p-53;
    acc += -std::log(u);
    if (acc > lambda)
      return k;
    ++k;
  }
}

} // namespace

rvector_t exact_probabilities(const ExperimentSpec &spec) {
  const DensityMatrix rho_se = make_se_state(spec.theta, spec.state_purity_v);
  const CMatrix u = interaction_unitary(spec.interaction, spec.cz_control_on_h);
  rvector_t p;
  p.reserve(spec.frame_states.size() * spec.frame_states.size() *
            spec.frame_states.size());
  for (StateLabel i : spec.frame_states)
    for (StateLabel j : spec.frame_states) {
      const Preparation prep =
          projective_preparation(state_density(i), state_density(j));
      const CMatrix out = ground_truth_output(rho_se, u, prep);
      for (StateLabel k : spec.frame_states) {
        const double prob = hs_inner(state_density(k).mat(), out).real();
        p.push_back(std::clamp(prob, 0.0, 1.0));
      }
    }
  return p;
}

Superchannel true_superchannel(const ExperimentSpec &spec) {
  const DensityMatrix rho_se = make_se_state(spec.theta, spec.state_purity_v);
  const CMatrix u = interaction_unitary(spec.interaction, spec.cz_control_on_h);
  return build_superchannel(rho_se, choi_from_unitary(u), 2);
}

CountDataset simulate_counts(const ExperimentSpec &spec) {
  if (spec.trials_per_config < 1)
    throw std::invalid_argument("simulate_counts: trials_per_config must be >= 1");
  const rvector_t p = exact_probabilities(spec);
  const double n0 = double(spec.trials_per_config);

  CountDataset ds;
  ds.frame_states = spec.frame_states;
  ds.exact = spec.exact;
  std::mt19937_64 rng(spec.seed);
  std::size_t idx = 0;
  for (StateLabel i : spec.frame_states)
    for (StateLabel j : spec.frame_states)
      for (StateLabel k : spec.frame_states) {
        CountRecord rec;
        rec.i = i;
        rec.j = j;
        rec.k = k;
        rec.trials = n0;
        rec.trials_known = true;
        rec.n = spec.exact ? n0 * p[idx]
                           : double(poisson_draw(rng, n0 * p[idx]));
        ds.records.push_back(rec);
        ++idx;
      }
  return ds;
}

/*******************************************************************************
 *
 * IC-norm sweep
 *
 ******************************************************************************/

namespace {

std::size_t worker_cap() {
  if (const char *env = std::getenv("SUPERCHAN_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1)
      return std::size_t(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

// Static partition; results land in preallocated slots, so the outcome is
// independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn) {
  const std::size_t workers = std::min(worker_cap(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += workers)
        fn(i);
    });
  for (auto &th : pool)
    th.join();
}

} // namespace

std::vector<SweepRow> fig4_sweep(const std::vector<InteractionTarget> &targets,
                                 const rvector_t &tau_grid, double v,
                                 double sdp_tol) {
  std::vector<SweepRow> rows(targets.size() * tau_grid.size());
  parallel_for(rows.size(), [&](std::size_t idx) {
    const InteractionTarget target = targets[idx / tau_grid.size()];
    const double tau = tau_grid[idx % tau_grid.size()];
    ExperimentSpec spec;
    spec.theta = theta_for_tangle(tau);
    spec.state_purity_v = v;
    spec.interaction = target;
    const Superchannel m = true_superchannel(spec);
    rows[idx] = SweepRow{tau, target, ic_norm(m, sdp_tol)};
  });
  return rows;
}

} // namespace superchan
