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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "superchan/simulator.hpp"
#include "superchan/tomography.hpp"
#include "testutil.hpp"

using namespace superchan;
using testutil::random_density;
using testutil::random_unitary;

namespace {

Superchannel preset_superchannel(double tau, InteractionTarget t) {
  ExperimentSpec spec;
  spec.theta = theta_for_tangle(tau);
  spec.interaction = t;
  return true_superchannel(spec);
}

CountDataset preset_counts(double tau, InteractionTarget t, std::uint64_t seed,
                           bool exact = false, std::uint64_t n0 = 5000) {
  ExperimentSpec spec;
  spec.theta = theta_for_tangle(tau);
  spec.interaction = t;
  spec.seed = seed;
  spec.exact = exact;
  spec.trials_per_config = n0;
  return simulate_counts(spec);
}

} // namespace

TEST_CASE("frame construction and ranks") {
  const Frame full = build_default_frame();
  CHECK(full.projectors.size() == 216);
  CHECK(full.op_rank == 64);
  CHECK(full.informationally_complete());
  for (const CMatrix &pi : full.projectors) {
    CHECK(pi.trace().real() == doctest::Approx(1.0));
    CHECK(pi.hermiticity_error() < 1e-12);
    CHECK(pi.frobenius_norm() == doctest::Approx(1.0)); // rank 1, trace 1
  }

  const Frame minimal = build_frame(
      {StateLabel::H, StateLabel::V, StateLabel::D, StateLabel::R});
  CHECK(minimal.projectors.size() == 64);
  CHECK(minimal.op_rank == 64);

  const Frame deficient = build_frame({StateLabel::H, StateLabel::V});
  CHECK(deficient.op_rank < 64); // cannot span coherences
  CHECK_FALSE(deficient.informationally_complete());
}

TEST_CASE("probabilities for a factorized superchannel") {
  // rho_S = |H><H| with the identity channel: p = Tr[rho_i rho_S] Tr[rho_j rho_k]
  const Superchannel m(kron(state_density(StateLabel::H).mat(),
                            choi_from_unitary(CMatrix::identity(2)).choi),
                       2);
  const Frame frame = build_default_frame();
  const rvector_t p = probabilities(m, frame);
  for (std::size_t r = 0; r < frame.labels.size(); ++r) {
    const auto &l = frame.labels[r];
    if (l[0] == StateLabel::H && l[1] == StateLabel::D && l[2] == StateLabel::D)
      CHECK(p[r] == doctest::Approx(1.0));
    if (l[0] == StateLabel::V)
      CHECK(p[r] == doctest::Approx(0.0));
    if (l[0] == StateLabel::D && l[1] == StateLabel::H && l[2] == StateLabel::V)
      CHECK(p[r] == doctest::Approx(0.0));
  }
}

TEST_CASE("probabilities are linear in the superchannel") {
  std::mt19937_64 rng(307);
  const Superchannel a = preset_superchannel(0.423, InteractionTarget::Z);
  const Superchannel b = preset_superchannel(0.908, InteractionTarget::H);
  const double lam = 0.4;
  const Superchannel mix(a.choi() * complex_t(lam, 0.0) +
                             b.choi() * complex_t(1.0 - lam, 0.0),
                         2);
  const Frame frame = build_default_frame();
  const rvector_t pa = probabilities(a, frame);
  const rvector_t pb = probabilities(b, frame);
  const rvector_t pm = probabilities(mix, frame);
  for (std::size_t r = 0; r < pm.size(); ++r)
    CHECK(pm[r] == doctest::Approx(lam * pa[r] + (1.0 - lam) * pb[r])
                       .epsilon(1e-10));
}

TEST_CASE("hedging arithmetic") {
  CountDataset ds;
  ds.beta = 0.1;
  ds.outcomes_k = 4;
  ds.records = {{StateLabel::H, StateLabel::H, StateLabel::H, 0.0, 5000.0, true},
                {StateLabel::H, StateLabel::H, StateLabel::V, 5000.0, 5000.0,
                 true}};
  const rvector_t p = hedge(ds);
  CHECK(p[0] == doctest::Approx(0.1 / 5000.4).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(5000.1 / 5000.4).epsilon(1e-12));
  CHECK(p[0] > 0.0);
  CHECK(p[1] < 1.0);

  // beta -> 0 recovers the raw frequency
  ds.beta = 1e-12;
  const rvector_t p0 = hedge(ds);
  CHECK(p0[1] == doctest::Approx(1.0).epsilon(1e-9));

  ds.beta = -1.0;
  CHECK_THROWS_AS(hedge(ds), std::invalid_argument);
}

TEST_CASE("weights formula and failure modes") {
  CountDataset ds;
  ds.records = {{StateLabel::H, StateLabel::H, StateLabel::H, 5000.0, 10000.0,
                 true},
                {StateLabel::H, StateLabel::H, StateLabel::V, 2500.0, 10000.0,
                 true}};
  const rvector_t w = weights(ds, {0.5, 0.25});
  CHECK(w[0] == doctest::Approx(200.0));
  CHECK(w[1] == doctest::Approx(std::sqrt(10000.0 / (0.25 * 0.75))));
  // symmetric about one half
  const rvector_t ws = weights(ds, {0.3, 0.7});
  CHECK(ws[0] == doctest::Approx(ws[1]));
  CHECK_THROWS_AS(weights(ds, {0.0, 0.5}), std::invalid_argument);
}

TEST_CASE("estimate_trials totals the four true-measurement outcomes") {
  const Frame frame = build_default_frame();
  CountDataset ds;
  ds.frame_states = six_state_labels();
  // 4 records H/V x j=D x H/V with counts 100, 0, 50, 50
  ds.records = {
      {StateLabel::H, StateLabel::D, StateLabel::H, 100.0, 0.0, false},
      {StateLabel::H, StateLabel::D, StateLabel::V, 0.0, 0.0, false},
      {StateLabel::V, StateLabel::D, StateLabel::H, 50.0, 0.0, false},
      {StateLabel::V, StateLabel::D, StateLabel::V, 50.0, 0.0, false}};
  const CountDataset filled = estimate_trials(ds, frame);
  for (const CountRecord &r : filled.records) {
    CHECK(r.trials_known);
    CHECK(r.trials == doctest::Approx(200.0));
  }

  // explicit N passes through untouched
  CountDataset known = ds;
  for (auto &r : known.records) {
    r.trials = 123.0;
    r.trials_known = true;
  }
  const CountDataset same = estimate_trials(known, frame);
  for (const CountRecord &r : same.records)
    CHECK(r.trials == doctest::Approx(123.0));

  // missing complements are an error
  CountDataset missing = ds;
  missing.records.pop_back();
  CHECK_THROWS_AS(estimate_trials(missing, frame), data_error);
}

TEST_CASE("estimated trials on noiseless data equal 4 N0 times the quad mean") {
  ExperimentSpec spec;
  spec.theta = theta_for_tangle(0.423);
  spec.exact = true;
  spec.trials_per_config = 5000;
  CountDataset ds = simulate_counts(spec);
  const rvector_t p = exact_probabilities(spec);
  for (auto &r : ds.records)
    r.trials_known = false;
  const Frame frame = build_default_frame();
  const CountDataset filled = estimate_trials(ds, frame);
  // spot check one quad: records are in lexicographic order over 6 states
  auto find = [&](StateLabel i, StateLabel j, StateLabel k) {
    for (std::size_t r = 0; r < frame.labels.size(); ++r)
      if (frame.labels[r][0] == i && frame.labels[r][1] == j &&
          frame.labels[r][2] == k)
        return r;
    throw std::logic_error("label not found");
  };
  const std::size_t idx = find(StateLabel::D, StateLabel::R, StateLabel::H);
  const double quad_mean =
      (p[find(StateLabel::D, StateLabel::R, StateLabel::H)] +
       p[find(StateLabel::A, StateLabel::R, StateLabel::H)] +
       p[find(StateLabel::D, StateLabel::R, StateLabel::V)] +
       p[find(StateLabel::A, StateLabel::R, StateLabel::V)]) /
      4.0;
  CHECK(filled.records[idx].trials ==
        doctest::Approx(4.0 * 5000.0 * quad_mean).epsilon(1e-12));
}

TEST_CASE("noiseless linear inversion round-trips the superchannel") {
  const Frame frame = build_default_frame();
  for (double tau : {0.012, 0.423, 0.908}) {
    const Superchannel m = preset_superchannel(tau, InteractionTarget::RYZ);
    const rvector_t p = probabilities(m, frame);
    const rvector_t w(p.size(), 1.0);
    const ReconstructionResult res = linear_inversion(p, frame, w);
    CHECK((res.superchannel.choi() - m.choi()).frobenius_norm() < 1e-10);
    CHECK(res.objective < 1e-10);
    CHECK(res.method == ReconstructionMethod::Linear);
  }
}

TEST_CASE("weighted and uniform linear inversion agree on noiseless data") {
  const Frame frame = build_default_frame();
  const Superchannel m = preset_superchannel(0.757, InteractionTarget::H);
  const rvector_t p = probabilities(m, frame);
  rvector_t w_nonuniform(p.size());
  for (std::size_t r = 0; r < p.size(); ++r)
    w_nonuniform[r] = 1.0 + 10.0 * p[r]; // arbitrary positive weights
  const auto uniform = linear_inversion(p, frame, rvector_t(p.size(), 1.0));
  const auto weighted = linear_inversion(p, frame, w_nonuniform);
  CHECK((uniform.superchannel.choi() - weighted.superchannel.choi())
            .frobenius_norm() < 1e-9);
}

TEST_CASE("uniform-weight linear inversion equals the dual-frame expansion") {
  const Frame frame = build_default_frame();
  const Superchannel m = preset_superchannel(0.423, InteractionTarget::Z);
  const rvector_t p = probabilities(m, frame);
  const std::vector<CMatrix> duals = dual_frame(frame);
  CMatrix via_duals(8, 8);
  for (std::size_t b = 0; b < p.size(); ++b)
    via_duals += duals[b] * complex_t(p[b], 0.0);
  const auto res = linear_inversion(p, frame, rvector_t(p.size(), 1.0));
  CHECK((res.superchannel.choi() - via_duals).frobenius_norm() < 1e-10);
}

TEST_CASE("linear inversion on Poisson data can leave the PSD cone") {
  const Frame frame = build_default_frame();
  const CountDataset ds = preset_counts(0.423, InteractionTarget::Z, 7);
  const rvector_t p = hedge(ds);
  const rvector_t w = weights(ds, p);
  const auto res = linear_inversion(p, frame, w);
  CHECK(res.diagnostics.min_eig_pre_projection < 0.0);
}

TEST_CASE("linear inversion rejects rank-deficient frames") {
  const Frame bad = build_frame({StateLabel::H, StateLabel::V});
  const rvector_t p(bad.projectors.size(), 0.1);
  const rvector_t w(bad.projectors.size(), 1.0);
  CHECK_THROWS_AS(linear_inversion(p, bad, w), std::invalid_argument);
}

TEST_CASE("dual frame identities") {
  // the {H,V} frame is orthonormal: duals equal the projectors
  const Frame ortho = build_frame({StateLabel::H, StateLabel::V});
  const std::vector<CMatrix> duals_ortho = dual_frame(ortho);
  for (std::size_t b = 0; b < duals_ortho.size(); ++b)
    CHECK((duals_ortho[b] - ortho.projectors[b]).frobenius_norm() < 1e-10);

  // sum_b <<D_b|Pi_b>> equals the dimension of the spanned space
  const Frame full = build_default_frame();
  const std::vector<CMatrix> duals = dual_frame(full);
  double total = 0.0;
  for (std::size_t b = 0; b < duals.size(); ++b)
    total += hs_inner(duals[b], full.projectors[b]).real();
  CHECK(total == doctest::Approx(64.0).epsilon(1e-9));

  // reconstruction identity on a random Hermitian operator
  std::mt19937_64 rng(311);
  const CMatrix h = testutil::random_hermitian(rng, 8);
  CMatrix rebuilt(8, 8);
  for (std::size_t b = 0; b < duals.size(); ++b)
    rebuilt += duals[b] * hs_inner(full.projectors[b], h);
  CHECK((rebuilt - h).frobenius_norm() < 1e-9);
}

TEST_CASE("MLE recovers the truth from exact data") {
  const Frame frame = build_default_frame();
  const Superchannel m = preset_superchannel(0.423, InteractionTarget::H);
  const CountDataset ds = preset_counts(0.423, InteractionTarget::H, 0, true);
  const ReconstructionResult res = mle_reconstruct(ds, frame);
  CHECK(res.diagnostics.converged);
  CHECK((res.superchannel.choi() - m.choi()).frobenius_norm() < 1e-6);
  CHECK(res.superchannel.min_eig() >= -1e-8);
  CHECK(res.superchannel.trace() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("MLE output is physical and beats the projected linear estimate") {
  const Frame frame = build_default_frame();
  const CountDataset ds = preset_counts(0.908, InteractionTarget::Z, 3);
  const ReconstructionResult mle = mle_reconstruct(ds, frame);
  CHECK(mle.diagnostics.converged);
  CHECK(mle.superchannel.min_eig() >= -1e-8);
  CHECK(mle.superchannel.trace() == doctest::Approx(2.0).epsilon(1e-6));

  // objective of the PSD-projected linear estimate is never better
  const rvector_t p = hedge(ds);
  const rvector_t w = weights(ds, p);
  const auto lin = linear_inversion(p, frame, w);
  CMatrix projected = project_psd(lin.superchannel.choi());
  projected *= complex_t(2.0 / projected.trace().real(), 0.0);
  double proj_obj = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    const double resid = hs_inner(frame.projectors[b], projected).real() - p[b];
    proj_obj += w[b] * w[b] * resid * resid;
  }
  CHECK(mle.objective * mle.objective <= proj_obj + 1e-9);
  CHECK(mle.diagnostics.min_eig_pre_projection ==
        doctest::Approx(lin.diagnostics.min_eig_pre_projection));
}

TEST_CASE("MLE reconstruction fidelity under Poisson noise") {
  const Frame frame = build_default_frame();
  const Superchannel truth = preset_superchannel(0.757, InteractionTarget::RYZ);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const CountDataset ds = preset_counts(0.757, InteractionTarget::RYZ, seed);
    const ReconstructionResult res = mle_reconstruct(ds, frame);
    CHECK(res.diagnostics.converged);
    const double fid =
        uhlmann_fidelity(res.superchannel.choi(), truth.choi()) / 4.0;
    CHECK(fid >= 0.99);
  }
}

TEST_CASE("hedging parameter barely moves the reconstruction") {
  const Frame frame = build_default_frame();
  const Superchannel truth = preset_superchannel(0.423, InteractionTarget::Z);
  CountDataset ds = preset_counts(0.423, InteractionTarget::Z, 11);
  rvector_t fids;
  for (double beta : {0.01, 0.1, 1.0}) {
    ds.beta = beta;
    const ReconstructionResult res = mle_reconstruct(ds, frame);
    fids.push_back(uhlmann_fidelity(res.superchannel.choi(), truth.choi()) /
                   4.0);
  }
  const double spread =
      *std::max_element(fids.begin(), fids.end()) -
      *std::min_element(fids.begin(), fids.end());
  CHECK(spread < 1e-3);
}

TEST_CASE("MLE validates the dataset against the frame") {
  const Frame frame = build_default_frame();
  CountDataset ds = preset_counts(0.136, InteractionTarget::Z, 1);
  ds.records.pop_back();
  CHECK_THROWS_AS(mle_reconstruct(ds, frame), data_error);

  CountDataset swapped = preset_counts(0.136, InteractionTarget::Z, 1);
  std::swap(swapped.records[0], swapped.records[1]);
  CHECK_THROWS_AS(mle_reconstruct(swapped, frame), data_error);
}
