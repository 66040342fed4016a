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

#include "superchan/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace superchan {

namespace {
constexpr double kRankTol = 1e-8; // relative singular-value threshold
} // namespace

/*******************************************************************************
 *
 * Frame
 *
 ******************************************************************************/

// Frame operator sum_b |Pi_b>><<Pi_b| as a dense d^6 x d^6 matrix.
static CMatrix frame_operator(const std::vector<CMatrix> &projectors,
                              const rvector_t *w2 = nullptr) {
  const std::size_t n = projectors.front().rows();
  CMatrix f(n * n, n * n);
  for (std::size_t b = 0; b < projectors.size(); ++b) {
    const CMatrix v = vectorize(projectors[b]);
    const double scale = w2 ? (*w2)[b] : 1.0;
    for (std::size_t i = 0; i < n * n; ++i) {
      const complex_t vi = v(i, 0) * scale;
      if (vi == complex_t(0.0, 0.0))
        continue;
      for (std::size_t j = 0; j < n * n; ++j)
        f(i, j) += vi * std::conj(v(j, 0));
    }
  }
  return f;
}

static std::size_t psd_rank(const CMatrix &f) {
  const HermEig eig = herm_eig(f, 1e-8 * std::max(1.0, f.frobenius_norm()));
  const double top = std::max(0.0, eig.eigenvalues.back());
  std::size_t rank = 0;
  for (double lam : eig.eigenvalues)
    if (lam > kRankTol * top)
      ++rank;
  return rank;
}

Frame build_frame(const std::vector<StateLabel> &states) {
  if (states.empty())
    throw std::invalid_argument("build_frame: empty state set");
  Frame frame;
  frame.states = states;
  frame.d = 2;
  std::vector<CMatrix> rho;
  rho.reserve(states.size());
  for (StateLabel s : states)
    rho.push_back(state_density(s).mat());

  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < states.size(); ++j)
      for (std::size_t k = 0; k < states.size(); ++k) {
        frame.projectors.push_back(
            kron(kron(rho[i], rho[j].conjugate()), rho[k]));
        frame.labels.push_back({states[i], states[j], states[k]});
      }
  frame.op_rank = psd_rank(frame_operator(frame.projectors));
  return frame;
}

Frame build_default_frame() { return build_frame(six_state_labels()); }

rvector_t probabilities(const Superchannel &m, const Frame &frame) {
  if (frame.projectors.front().rows() != m.choi().rows())
    throw std::invalid_argument("probabilities: frame/superchannel dimension mismatch");
  rvector_t p;
  p.reserve(frame.projectors.size());
  for (const CMatrix &pi : frame.projectors) {
    double v = hs_inner(pi, m.choi()).real();
    if (v < -1e-10 || v > 1.0 + 1e-10)
      throw std::runtime_error("probabilities: value escapes [0,1] beyond slack");
    p.push_back(std::clamp(v, 0.0, 1.0));
  }
  return p;
}

/*******************************************************************************
 *
 * Count data
 *
 ******************************************************************************/

rvector_t hedge(const CountDataset &ds) {
  if (ds.beta <= 0.0)
    throw std::invalid_argument("hedge: beta must be positive");
  if (ds.outcomes_k < 2)
    throw std::invalid_argument("hedge: K must be at least 2");
  rvector_t p;
  p.reserve(ds.records.size());
  for (const CountRecord &r : ds.records) {
    if (!r.trials_known)
      throw std::invalid_argument("hedge: unknown trial count (run estimate_trials)");
    p.push_back((r.n + ds.beta) / (r.trials + double(ds.outcomes_k) * ds.beta));
  }
  return p;
}

rvector_t raw_frequencies(const CountDataset &ds) {
  rvector_t p;
  p.reserve(ds.records.size());
  for (const CountRecord &r : ds.records) {
    if (!r.trials_known)
      throw std::invalid_argument("raw_frequencies: unknown trial count");
    p.push_back(r.n / r.trials);
  }
  return p;
}

rvector_t weights(const CountDataset &ds, const rvector_t &p) {
  if (p.size() != ds.records.size())
    throw std::invalid_argument("weights: probability list size mismatch");
  rvector_t w;
  w.reserve(p.size());
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (p[r] <= 0.0 || p[r] >= 1.0)
      throw std::invalid_argument("weights: probabilities must lie strictly in (0,1)");
    w.push_back(std::sqrt(ds.records[r].trials / (p[r] * (1.0 - p[r]))));
  }
  return w;
}

CountDataset estimate_trials(const CountDataset &ds, const Frame &frame) {
  // The frame must pair every state with its orthogonal partner.
  for (StateLabel s : frame.states) {
    if (std::find(frame.states.begin(), frame.states.end(),
                  complement_label(s)) == frame.states.end())
      throw std::invalid_argument(
          "estimate_trials: frame states must come in orthogonal pairs");
  }

  std::map<std::array<int, 3>, std::size_t> index;
  auto key = [](StateLabel a, StateLabel b, StateLabel c) {
    return std::array<int, 3>{int(a), int(b), int(c)};
  };
  for (std::size_t r = 0; r < ds.records.size(); ++r) {
    const CountRecord &rec = ds.records[r];
    index[key(rec.i, rec.j, rec.k)] = r;
  }

  CountDataset out = ds;
  for (CountRecord &rec : out.records) {
    if (rec.trials_known)
      continue; // passthrough
    const StateLabel ibar = complement_label(rec.i);
    const StateLabel kbar = complement_label(rec.k);
    double total = 0.0;
    for (const auto &cfg :
         {key(rec.i, rec.j, rec.k), key(ibar, rec.j, rec.k),
          key(rec.i, rec.j, kbar), key(ibar, rec.j, kbar)}) {
      auto it = index.find(cfg);
      if (it == index.end())
        throw data_error("estimate_trials: missing complement configuration");
      total += ds.records[it->second].n;
    }
    rec.trials = total;
    rec.trials_known = true;
  }
  return out;
}

/*******************************************************************************
 *
 * Linear inversion
 *
 ******************************************************************************/

// Pseudo-inverse action x -> F^+ y for the Hermitian PSD frame operator.
static CMatrix psd_pinv_apply(const HermEig &eig, const CMatrix &y,
                              double rel_tol) {
  const std::size_t n = eig.eigenvalues.size();
  const double top = std::max(0.0, eig.eigenvalues.back());
  CMatrix x(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.eigenvalues[k];
    if (lam <= rel_tol * top)
      continue;
    complex_t proj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      proj += std::conj(eig.eigenvectors(i, k)) * y(i, 0);
    proj /= lam;
    for (std::size_t i = 0; i < n; ++i)
      x(i, 0) += proj * eig.eigenvectors(i, k);
  }
  return x;
}

static Superchannel devectorize_symmetrized(const CMatrix &vec, std::size_t d) {
  CMatrix lam = devectorize(vec);
  lam = (lam + lam.adjoint()) * complex_t(0.5, 0.0);
  return Superchannel(std::move(lam), d);
}

ReconstructionResult linear_inversion(const rvector_t &p, const Frame &frame,
                                      const rvector_t &w) {
  const std::size_t nrec = frame.projectors.size();
  if (p.size() != nrec || w.size() != nrec)
    throw std::invalid_argument("linear_inversion: p/w length must match frame");
  if (frame.op_rank < frame.full_rank())
    throw std::invalid_argument("linear_inversion: frame is rank deficient");

  const bool uniform =
      std::all_of(w.begin(), w.end(), [](double x) { return x == 1.0; });

  CMatrix est_vec(frame.projectors.front().rows() *
                      frame.projectors.front().rows(),
                  1);
  if (uniform) {
    // Dual-frame expansion L = sum_b p_b D_b.
    const std::vector<CMatrix> duals = dual_frame(frame);
    for (std::size_t b = 0; b < nrec; ++b)
      est_vec += vectorize(duals[b]) * complex_t(p[b], 0.0);
  } else {
    rvector_t w2(nrec);
    for (std::size_t b = 0; b < nrec; ++b)
      w2[b] = w[b] * w[b];
    const CMatrix f = frame_operator(frame.projectors, &w2);
    const HermEig eig = herm_eig(f, 1e-8 * std::max(1.0, f.frobenius_norm()));
    const double top = std::max(0.0, eig.eigenvalues.back());
    std::size_t rank = 0;
    for (double lam : eig.eigenvalues)
      if (lam > kRankTol * top)
        ++rank;
    if (rank < frame.full_rank())
      throw std::invalid_argument("linear_inversion: normal matrix is rank deficient");
    CMatrix rhs(f.rows(), 1);
    for (std::size_t b = 0; b < nrec; ++b)
      rhs += vectorize(frame.projectors[b]) * complex_t(w2[b] * p[b], 0.0);
    est_vec = psd_pinv_apply(eig, rhs, kRankTol);
  }

  ReconstructionResult res{devectorize_symmetrized(est_vec, frame.d), 0.0,
                           ReconstructionMethod::Linear, {}};
  double obj = 0.0;
  for (std::size_t b = 0; b < nrec; ++b) {
    const double resid =
        hs_inner(frame.projectors[b], res.superchannel.choi()).real() - p[b];
    obj += w[b] * w[b] * resid * resid;
  }
  res.objective = std::sqrt(obj);
  res.diagnostics.min_eig_pre_projection = res.superchannel.min_eig();
  res.diagnostics.iterations = 0;
  res.diagnostics.kkt_residual = 0.0;
  return res;
}

std::vector<CMatrix> dual_frame(const Frame &frame) {
  const CMatrix f = frame_operator(frame.projectors);
  const HermEig eig = herm_eig(f, 1e-8 * std::max(1.0, f.frobenius_norm()));
  std::vector<CMatrix> duals;
  duals.reserve(frame.projectors.size());
  for (const CMatrix &pi : frame.projectors)
    duals.push_back(devectorize(psd_pinv_apply(eig, vectorize(pi), kRankTol)));
  return duals;
}

/*******************************************************************************
 *
 * Maximum-likelihood reconstruction
 *
 ******************************************************************************/

namespace {

// Exact Frobenius projection onto {L Hermitian, L >= 0, Tr L = d}: project
// the spectrum onto the scaled simplex by water-filling.
CMatrix project_spectrahedron(const CMatrix &a, double target_trace) {
  const HermEig eig = herm_eig(a, 1e-6 * std::max(1.0, a.frobenius_norm()));
  rvector_t lam = eig.eigenvalues; // ascending
  const std::size_t n = lam.size();
  // Find mu with sum max(lam_i - mu, 0) = target_trace.
  double mu = 0.0;
  {
    double cumsum = 0.0;
    bool found = false;
    for (std::size_t k = n; k-- > 0;) {
      cumsum += lam[k];
      const std::size_t active = n - k;
      const double candidate = (cumsum - target_trace) / double(active);
      if (k == 0 || candidate >= lam[k - 1]) {
        mu = candidate;
        found = true;
        break;
      }
    }
    if (!found)
      mu = (cumsum - target_trace) / double(n);
  }
  rvector_t clipped(n);
  for (std::size_t k = 0; k < n; ++k)
    clipped[k] = std::max(0.0, lam[k] - mu);

  CMatrix out(a.rows(), a.cols());
  const CMatrix &v = eig.eigenvectors;
  for (std::size_t k = 0; k < n; ++k) {
    if (clipped[k] == 0.0)
      continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += clipped[k] * v(i, k) * std::conj(v(j, k));
  }
  return out;
}

struct MleProblem {
  const std::vector<CMatrix> *projectors;
  rvector_t p, w2;
  double d;

  double objective(const CMatrix &lam) const {
    double s = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
      const double r = hs_inner((*projectors)[b], lam).real() - p[b];
      s += w2[b] * r * r;
    }
    return s;
  }

  CMatrix gradient(const CMatrix &lam) const {
    CMatrix g(lam.rows(), lam.cols());
    for (std::size_t b = 0; b < p.size(); ++b) {
      const double r = hs_inner((*projectors)[b], lam).real() - p[b];
      const double c = 2.0 * w2[b] * r;
      if (c == 0.0)
        continue;
      g += (*projectors)[b] * complex_t(c, 0.0);
    }
    return g;
  }

  // Convexity gap bound f(L) - f* <= <G, L> - d * lambda_min(G).
  double duality_gap(const CMatrix &lam) const {
    const CMatrix g = gradient(lam);
    const double lo =
        min_eigenvalue(g, 1e-6 * std::max(1.0, g.frobenius_norm()));
    return hs_inner(g, lam).real() - d * lo;
  }
};

} // namespace

ReconstructionResult mle_reconstruct(const CountDataset &ds, const Frame &frame,
                                     const MleOptions &opts) {
  CountDataset data = ds;
  if (std::any_of(data.records.begin(), data.records.end(),
                  [](const CountRecord &r) { return !r.trials_known; }))
    data = estimate_trials(data, frame);
  if (data.records.size() != frame.projectors.size())
    throw data_error("mle_reconstruct: dataset size does not match frame");
  for (std::size_t r = 0; r < data.records.size(); ++r) {
    const auto &lbl = frame.labels[r];
    if (data.records[r].i != lbl[0] || data.records[r].j != lbl[1] ||
        data.records[r].k != lbl[2])
      throw data_error("mle_reconstruct: record order does not match frame");
  }

  MleProblem prob;
  prob.projectors = &frame.projectors;
  prob.d = double(frame.d);
  if (data.exact) {
    prob.p = raw_frequencies(data);
    prob.w2.assign(prob.p.size(), 1.0);
  } else {
    prob.p = hedge(data);
    const rvector_t w = weights(data, prob.p);
    prob.w2.resize(w.size());
    for (std::size_t b = 0; b < w.size(); ++b)
      prob.w2[b] = w[b] * w[b];
  }

  // Lipschitz constant of the gradient: 2 lambda_max of the weighted frame
  // operator.
  const CMatrix fop = frame_operator(frame.projectors, &prob.w2);
  const HermEig feig =
      herm_eig(fop, 1e-8 * std::max(1.0, fop.frobenius_norm()));
  const double lips = 2.0 * std::max(feig.eigenvalues.back(), 1e-300);

  // Warm start from the projected linear-inversion estimate.
  rvector_t w_sqrt(prob.w2.size());
  for (std::size_t b = 0; b < prob.w2.size(); ++b)
    w_sqrt[b] = std::sqrt(prob.w2[b]);
  const ReconstructionResult lin = linear_inversion(prob.p, frame, w_sqrt);
  const double min_eig_raw = lin.diagnostics.min_eig_pre_projection;

  CMatrix x = project_spectrahedron(lin.superchannel.choi(), prob.d);
  CMatrix y = x;
  double t_acc = 1.0;
  double f_prev = prob.objective(x);

  const double gap_scale = std::max(1.0, f_prev);
  std::size_t iter = 0;
  double gap = prob.duality_gap(x);
  bool converged = gap <= opts.tol * gap_scale;

  while (!converged && iter < opts.max_iterations) {
    ++iter;
    const CMatrix g = prob.gradient(y);
    CMatrix x_next =
        project_spectrahedron(y - g * complex_t(1.0 / lips, 0.0), prob.d);
    const double f_next = prob.objective(x_next);
    if (f_next > f_prev) {
      // adaptive restart of the momentum sequence
      t_acc = 1.0;
      y = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
    y = x_next + (x_next - x) * complex_t((t_acc - 1.0) / t_next, 0.0);
    x = std::move(x_next);
    t_acc = t_next;
    f_prev = f_next;
    if (iter % 25 == 0 || iter == opts.max_iterations) {
      gap = prob.duality_gap(x);
      converged = gap <= opts.tol * gap_scale;
    }
  }
  gap = prob.duality_gap(x);
  converged = gap <= opts.tol * gap_scale;
  if (!converged && opts.throw_on_failure)
    throw solver_error("mle_reconstruct: iteration cap reached", gap / gap_scale);

  ReconstructionResult res{Superchannel(x, frame.d), std::sqrt(prob.objective(x)),
                           ReconstructionMethod::Mle, {}};
  res.diagnostics.min_eig_pre_projection = min_eig_raw;
  res.diagnostics.iterations = iter;
  res.diagnostics.kkt_residual = gap / gap_scale;
  res.diagnostics.converged = converged;
  return res;
}

} // namespace superchan
