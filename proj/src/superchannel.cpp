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

#include "superchan/superchannel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superchan {

namespace {
constexpr double kHermTol = 1e-10;
constexpr double kEpsProb = 1e-9;
} // namespace

/*******************************************************************************
 *
 * Superchannel and Preparation classes
 *
 ******************************************************************************/

Superchannel::Superchannel(CMatrix choi, std::size_t d)
    : choi_(std::move(choi)), d_(d) {
  if (d_ < 2)
    throw std::invalid_argument("Superchannel: system dimension must be >= 2");
  if (!choi_.is_square() || choi_.rows() != d * d * d)
    throw std::invalid_argument("Superchannel: Choi dimension must be d^3");
  if (choi_.hermiticity_error() > kHermTol)
    throw std::invalid_argument("Superchannel: Choi matrix is not Hermitian");
  choi_ = (choi_ + choi_.adjoint()) * complex_t(0.5, 0.0);
}

Preparation::Preparation(CMatrix choi, std::size_t d)
    : choi_(std::move(choi)), d_(d) {
  if (!choi_.is_square() || choi_.rows() != d * d)
    throw std::invalid_argument("Preparation: Choi dimension must be d^2");
  if (choi_.hermiticity_error() > kHermTol)
    throw std::invalid_argument("Preparation: Choi matrix is not Hermitian");
  if (min_eigenvalue(choi_) < -1e-8)
    throw std::invalid_argument("Preparation: Choi matrix is not PSD");
  choi_ = (choi_ + choi_.adjoint()) * complex_t(0.5, 0.0);
}

const CMatrix &Preparation::rho_i() const {
  if (!rho_i_)
    throw std::logic_error("Preparation: rho_i only defined for projective kind");
  return *rho_i_;
}

const CMatrix &Preparation::rho_j() const {
  if (!rho_j_)
    throw std::logic_error("Preparation: rho_j only defined for projective kind");
  return *rho_j_;
}

Preparation projective_preparation(const DensityMatrix &rho_i,
                                   const DensityMatrix &rho_j) {
  if (rho_i.dim() != rho_j.dim())
    throw std::invalid_argument("projective_preparation: dimension mismatch");
  if (!rho_i.is_pure() || !rho_j.is_pure())
    throw std::invalid_argument(
        "projective_preparation: projection and rotation states must be pure");
  Preparation p(kron(rho_i.mat().conjugate(), rho_j.mat()), rho_i.dim());
  p.kind_ = Preparation::Kind::Projective;
  p.rho_i_ = rho_i.mat();
  p.rho_j_ = rho_j.mat();
  return p;
}

/*******************************************************************************
 *
 * Construction and application
 *
 ******************************************************************************/

Superchannel build_superchannel(const DensityMatrix &rho_se,
                                const Channel &u_se, std::size_t d_sys) {
  const std::size_t dse = rho_se.dim();
  if (d_sys < 2 || dse % d_sys != 0)
    throw std::invalid_argument(
        "build_superchannel: SE dimension not divisible by system dimension");
  const std::size_t de = dse / d_sys;
  if (u_se.dim_in != dse || u_se.dim_out != dse)
    throw std::invalid_argument(
        "build_superchannel: interaction must act on the joint SE space");
  if (!is_cp(u_se))
    throw std::invalid_argument("build_superchannel: interaction is not CP");

  const std::size_t d = d_sys;
  const CMatrix &rho = rho_se.mat();
  const CMatrix &lu = u_se.choi;

  // L_U index (s_in, e_in, s_out, e_out) flattened with e_out least
  // significant; the SE output space is itself ordered system (x) env.
  auto lu_idx = [&](std::size_t s_in, std::size_t e_in, std::size_t s_out,
                    std::size_t e_out) {
    return ((s_in * de + e_in) * d + s_out) * de + e_out;
  };

  CMatrix choi(d * d * d, d * d * d);
  for (std::size_t i1 = 0; i1 < d; ++i1)
    for (std::size_t i2 = 0; i2 < d; ++i2)
      for (std::size_t i3 = 0; i3 < d; ++i3)
        for (std::size_t j1 = 0; j1 < d; ++j1)
          for (std::size_t j2 = 0; j2 < d; ++j2)
            for (std::size_t j3 = 0; j3 < d; ++j3) {
              complex_t acc = 0.0;
              for (std::size_t n = 0; n < de; ++n)
                for (std::size_t m = 0; m < de; ++m) {
                  const complex_t r = rho(i1 * de + n, j1 * de + m);
                  if (r == complex_t(0.0, 0.0))
                    continue;
                  complex_t u_sum = 0.0;
                  for (std::size_t l = 0; l < de; ++l)
                    u_sum += lu(lu_idx(i2, n, i3, l), lu_idx(j2, m, j3, l));
                  acc += r * u_sum;
                }
              choi((i1 * d + i2) * d + i3, (j1 * d + j2) * d + j3) = acc;
            }
  return Superchannel(std::move(choi), d);
}

CMatrix apply_superchannel(const Superchannel &m, const Preparation &p) {
  const std::size_t d = m.d();
  if (p.d() != d)
    throw std::invalid_argument("apply_superchannel: dimension mismatch");
  const CMatrix &lm = m.choi();
  const CMatrix &lp = p.choi();
  CMatrix out(d, d);
  for (std::size_t i3 = 0; i3 < d; ++i3)
    for (std::size_t j3 = 0; j3 < d; ++j3) {
      complex_t acc = 0.0;
      for (std::size_t i1 = 0; i1 < d; ++i1)
        for (std::size_t i2 = 0; i2 < d; ++i2)
          for (std::size_t j1 = 0; j1 < d; ++j1)
            for (std::size_t j2 = 0; j2 < d; ++j2)
              acc += lp(i1 * d + i2, j1 * d + j2) *
                     lm((i1 * d + i2) * d + i3, (j1 * d + j2) * d + j3);
      out(i3, j3) = acc;
    }
  return out;
}

DensityMatrix average_initial_state(const Superchannel &m) {
  const std::size_t d = m.d();
  CMatrix red = partial_trace(m.choi(), SubsystemShape{{d, d, d}}, {1, 2});
  return DensityMatrix(red * complex_t(1.0 / double(d), 0.0));
}

Channel average_effective_map(const Superchannel &m) {
  const std::size_t d = m.d();
  return Channel(partial_trace(m.choi(), SubsystemShape{{d, d, d}}, {0}), d, d);
}

Superchannel separable_superchannel(const Superchannel &m) {
  return Superchannel(
      kron(average_initial_state(m).mat(), average_effective_map(m).choi),
      m.d());
}

EffectiveChannel effective_channel(const Superchannel &m,
                                   const DensityMatrix &rho1) {
  const std::size_t d = m.d();
  if (rho1.dim() != d)
    throw std::invalid_argument("effective_channel: dimension mismatch");
  const CMatrix &lm = m.choi();
  const CMatrix &r1 = rho1.mat();

  // Numerator Tr_1[(rho1 (x) 1_23) L_M] on X2 (x) X3.
  CMatrix num(d * d, d * d);
  for (std::size_t i2 = 0; i2 < d; ++i2)
    for (std::size_t i3 = 0; i3 < d; ++i3)
      for (std::size_t j2 = 0; j2 < d; ++j2)
        for (std::size_t j3 = 0; j3 < d; ++j3) {
          complex_t acc = 0.0;
          for (std::size_t a = 0; a < d; ++a)
            for (std::size_t u = 0; u < d; ++u)
              acc += r1(a, u) *
                     lm((u * d + i2) * d + i3, (a * d + j2) * d + j3);
          num(i2 * d + i3, j2 * d + j3) = acc;
        }

  const double p = num.trace().real() / double(d);
  if (p <= kEpsProb)
    throw std::invalid_argument(
        "effective_channel: post-selection probability vanishes");
  EffectiveChannel ec;
  ec.channel = Channel(num * complex_t(1.0 / p, 0.0), d, d);
  ec.success_prob = p;
  return ec;
}

double prep_fidelity(const Superchannel &m, const DensityMatrix &rho1,
                     const CMatrix &u_target) {
  const EffectiveChannel ec = effective_channel(m, rho1);
  const Channel target = choi_from_unitary(u_target);
  const double d2 = double(m.d() * m.d());
  return uhlmann_fidelity(ec.channel.choi, target.choi) / d2;
}

double check_tp_condition(const Superchannel &m, const DensityMatrix &rho_se) {
  const std::size_t d = m.d();
  if (rho_se.dim() % d != 0)
    throw std::invalid_argument("check_tp_condition: dimension mismatch");
  const std::size_t de = rho_se.dim() / d;
  const CMatrix marg = partial_trace(m.choi(), SubsystemShape{{d, d, d}}, {2});
  const CMatrix rho_s =
      partial_trace(rho_se.mat(), SubsystemShape{{d, de}}, {1});
  return (marg - kron(rho_s, CMatrix::identity(d))).frobenius_norm();
}

/*******************************************************************************
 *
 * Preparation-fidelity optimization
 *
 ******************************************************************************/

DensityMatrix bloch_projection_state(double theta, double phi) {
  const complex_t a = std::cos(theta);
  const complex_t b = std::exp(complex_t(0.0, phi)) * std::sin(theta);
  return DensityMatrix(CMatrix(2, 2,
                               {std::norm(std::cos(theta)), a * std::conj(b),
                                b * std::conj(a), std::norm(std::sin(theta))}));
}

namespace {

// F_prep as a function on the (theta, phi) plane; returns nullopt where the
// post-selection probability vanishes. Smooth and 2pi-periodic in phi, and
// even around theta = 0 with a phi shift, so unconstrained simplex moves
// stay meaningful.
std::optional<double> surface_value(const Superchannel &m,
                                    const Channel &target, double theta,
                                    double phi) {
  const DensityMatrix rho1 = bloch_projection_state(theta, phi);
  const CMatrix &lm = m.choi();
  const CMatrix &r1 = rho1.mat();
  const std::size_t d = m.d();

  CMatrix num(d * d, d * d);
  for (std::size_t i2 = 0; i2 < d; ++i2)
    for (std::size_t i3 = 0; i3 < d; ++i3)
      for (std::size_t j2 = 0; j2 < d; ++j2)
        for (std::size_t j3 = 0; j3 < d; ++j3) {
          complex_t acc = 0.0;
          for (std::size_t a = 0; a < d; ++a)
            for (std::size_t u = 0; u < d; ++u)
              acc += r1(a, u) *
                     lm((u * d + i2) * d + i3, (a * d + j2) * d + j3);
          num(i2 * d + i3, j2 * d + j3) = acc;
        }
  const double p = num.trace().real() / double(d);
  if (p <= kEpsProb)
    return std::nullopt;
  const CMatrix eff = num * complex_t(1.0 / p, 0.0);
  return uhlmann_fidelity(eff, target.choi) / double(d * d);
}

struct SimplexPoint {
  double theta, phi, value;
};

} // namespace

PrepOptimum optimize_prep(const Superchannel &m, const CMatrix &u_target,
                          OptMode mode) {
  if (m.d() != 2)
    throw std::invalid_argument("optimize_prep: only qubit superchannels supported");
  const Channel target = choi_from_unitary(u_target);
  const double sign = (mode == OptMode::Max) ? 1.0 : -1.0;

  constexpr std::size_t n_theta = 64, n_phi = 128;
  PrepOptimum result;
  result.surface.reserve(n_theta * n_phi);

  double best = -1e300;
  double best_theta = 0.0, best_phi = 0.0;
  for (std::size_t it = 0; it < n_theta; ++it) {
    const double theta = double(it) * (M_PI / 2.0) / double(n_theta - 1);
    for (std::size_t ip = 0; ip < n_phi; ++ip) {
      const double phi = double(ip) * (2.0 * M_PI) / double(n_phi);
      PrepSurfacePoint pt{theta, phi, 0.0, false};
      const auto f = surface_value(m, target, theta, phi);
      if (f) {
        pt.f = *f;
        if (sign * *f > best) {
          best = sign * *f;
          best_theta = theta;
          best_phi = phi;
        }
      } else {
        pt.skipped = true;
        ++result.skipped_points;
      }
      result.surface.push_back(pt);
    }
  }
  if (best == -1e300)
    throw std::invalid_argument(
        "optimize_prep: every grid point has vanishing success probability");

  // Nelder-Mead refinement from the best grid cell.
  auto eval = [&](double theta, double phi) -> double {
    const auto f = surface_value(m, target, theta, phi);
    return f ? sign * *f : -1e300;
  };
  const double h_t = (M_PI / 2.0) / double(n_theta - 1);
  const double h_p = (2.0 * M_PI) / double(n_phi);
  std::vector<SimplexPoint> simplex = {
      {best_theta, best_phi, best},
      {best_theta + h_t, best_phi, eval(best_theta + h_t, best_phi)},
      {best_theta, best_phi + h_p, eval(best_theta, best_phi + h_p)}};

  for (std::size_t iter = 0; iter < 300; ++iter) {
    std::sort(simplex.begin(), simplex.end(),
              [](const SimplexPoint &a, const SimplexPoint &b) {
                return a.value > b.value;
              });
    if (simplex[0].value - simplex[2].value < 1e-7)
      break;
    const double ct = 0.5 * (simplex[0].theta + simplex[1].theta);
    const double cp = 0.5 * (simplex[0].phi + simplex[1].phi);
    const SimplexPoint &worst = simplex[2];
    SimplexPoint refl{2.0 * ct - worst.theta, 2.0 * cp - worst.phi, 0.0};
    refl.value = eval(refl.theta, refl.phi);
    if (refl.value > simplex[0].value) {
      SimplexPoint exp_{3.0 * ct - 2.0 * worst.theta,
                        3.0 * cp - 2.0 * worst.phi, 0.0};
      exp_.value = eval(exp_.theta, exp_.phi);
      simplex[2] = (exp_.value > refl.value) ? exp_ : refl;
    } else if (refl.value > simplex[1].value) {
      simplex[2] = refl;
    } else {
      SimplexPoint con{0.5 * (ct + worst.theta), 0.5 * (cp + worst.phi), 0.0};
      con.value = eval(con.theta, con.phi);
      if (con.value > worst.value) {
        simplex[2] = con;
      } else {
        // shrink toward the best vertex
        for (std::size_t k = 1; k < 3; ++k) {
          simplex[k].theta = 0.5 * (simplex[k].theta + simplex[0].theta);
          simplex[k].phi = 0.5 * (simplex[k].phi + simplex[0].phi);
          simplex[k].value = eval(simplex[k].theta, simplex[k].phi);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const SimplexPoint &a, const SimplexPoint &b) {
              return a.value > b.value;
            });

  // Map back into the canonical chart theta in [0, pi/2], phi in [0, 2pi).
  double th = simplex[0].theta, ph = simplex[0].phi;
  th = std::fmod(th, 2.0 * M_PI);
  if (th < 0.0) {
    th = -th;
    ph += M_PI;
  }
  if (th > M_PI) {
    th = 2.0 * M_PI - th;
    ph += M_PI;
  }
  if (th > M_PI / 2.0) {
    th = M_PI - th;
    ph += M_PI;
  }
  ph = std::fmod(ph, 2.0 * M_PI);
  if (ph < 0.0)
    ph += 2.0 * M_PI;
  // Each fold maps to the same projector, so this re-evaluation is a
  // safety net only.
  double folded = eval(th, ph);
  if (folded < simplex[0].value - 1e-9) {
    th = simplex[0].theta;
    ph = simplex[0].phi;
    folded = simplex[0].value;
  }

  result.theta = th;
  result.phi = ph;
  result.f = sign * folded;
  return result;
}

} // namespace superchan
