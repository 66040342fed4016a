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

#include "superchan/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace superchan {

namespace {
constexpr double kHermTol = 1e-10;
constexpr double kPsdTol = 1e-8;
constexpr double kTraceTol = 1e-8;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
} // namespace

/*******************************************************************************
 *
 * DensityMatrix class
 *
 ******************************************************************************/

DensityMatrix::DensityMatrix(const CMatrix &mat) {
  if (!mat.is_square())
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  if (mat.hermiticity_error() > kHermTol)
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  if (std::abs(mat.trace().real() - 1.0) > kTraceTol ||
      std::abs(mat.trace().imag()) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace must be 1");
  if (min_eigenvalue(mat) < -kPsdTol)
    throw std::invalid_argument("DensityMatrix: matrix is not PSD");
  mat_ = (mat + mat.adjoint()) * complex_t(0.5, 0.0);
}

DensityMatrix DensityMatrix::pure(const CMatrix &ket) {
  if (ket.cols() != 1)
    throw std::invalid_argument("DensityMatrix::pure: ket must be a column vector");
  return DensityMatrix(ket * ket.adjoint());
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

/*******************************************************************************
 *
 * Channel class
 *
 ******************************************************************************/

Channel::Channel(CMatrix choi_in, std::size_t d_in, std::size_t d_out)
    : choi(std::move(choi_in)), dim_in(d_in), dim_out(d_out) {
  if (!choi.is_square() || choi.rows() != d_in * d_out)
    throw std::invalid_argument("Channel: Choi dimension must be dim_in*dim_out");
  if (choi.hermiticity_error() > kHermTol)
    throw std::invalid_argument("Channel: Choi matrix is not Hermitian");
  choi = (choi + choi.adjoint()) * complex_t(0.5, 0.0);
}

Channel choi_from_map_action(
    const std::function<CMatrix(std::size_t, std::size_t)> &action,
    std::size_t d_in, std::size_t d_out) {
  CMatrix choi(d_in * d_out, d_in * d_out);
  for (std::size_t i = 0; i < d_in; ++i)
    for (std::size_t j = 0; j < d_in; ++j) {
      const CMatrix img = action(i, j);
      if (img.rows() != d_out || img.cols() != d_out)
        throw std::invalid_argument(
            "choi_from_map_action: image has wrong dimension");
      for (std::size_t a = 0; a < d_out; ++a)
        for (std::size_t b = 0; b < d_out; ++b)
          choi(i * d_out + a, j * d_out + b) = img(a, b);
    }
  return Channel(std::move(choi), d_in, d_out);
}

Channel choi_from_unitary(const CMatrix &u) {
  if (!u.is_square())
    throw std::invalid_argument("choi_from_unitary: matrix must be square");
  const std::size_t d = u.rows();
  if ((u.adjoint() * u - CMatrix::identity(d)).frobenius_norm() > 1e-10)
    throw std::invalid_argument("choi_from_unitary: matrix is not unitary");
  const CMatrix v = vectorize(u);
  return Channel(v * v.adjoint(), d, d);
}

CMatrix apply_channel(const Channel &ch, const CMatrix &rho) {
  if (!rho.is_square() || rho.rows() != ch.dim_in)
    throw std::invalid_argument("apply_channel: state dimension mismatch");
  const std::size_t di = ch.dim_in, dout = ch.dim_out;
  CMatrix out(dout, dout);
  for (std::size_t i = 0; i < dout; ++i)
    for (std::size_t j = 0; j < dout; ++j) {
      complex_t acc = 0.0;
      for (std::size_t n = 0; n < di; ++n)
        for (std::size_t m = 0; m < di; ++m)
          acc += rho(n, m) * ch.choi(n * dout + i, m * dout + j);
      out(i, j) = acc;
    }
  return out;
}

CMatrix apply_channel(const Channel &ch, const DensityMatrix &rho) {
  return apply_channel(ch, rho.mat());
}

bool is_cp(const Channel &ch, double tol) {
  return min_eigenvalue(ch.choi) >= -tol;
}

bool is_tp(const Channel &ch, double tol) {
  const CMatrix marg =
      partial_trace(ch.choi, SubsystemShape{{ch.dim_in, ch.dim_out}}, {1});
  return (marg - CMatrix::identity(ch.dim_in)).frobenius_norm() <= tol;
}

/*******************************************************************************
 *
 * Polarization states
 *
 ******************************************************************************/

const std::vector<StateLabel> &six_state_labels() {
  static const std::vector<StateLabel> labels = {
      StateLabel::H, StateLabel::V, StateLabel::D,
      StateLabel::A, StateLabel::R, StateLabel::L};
  return labels;
}

StateLabel complement_label(StateLabel s) {
  switch (s) {
  case StateLabel::H: return StateLabel::V;
  case StateLabel::V: return StateLabel::H;
  case StateLabel::D: return StateLabel::A;
  case StateLabel::A: return StateLabel::D;
  case StateLabel::R: return StateLabel::L;
  case StateLabel::L: return StateLabel::R;
  }
  throw std::invalid_argument("complement_label: unknown label");
}

CMatrix state_ket(StateLabel s) {
  switch (s) {
  case StateLabel::H: return CMatrix(2, 1, {1.0, 0.0});
  case StateLabel::V: return CMatrix(2, 1, {0.0, 1.0});
  case StateLabel::D: return CMatrix(2, 1, {kInvSqrt2, kInvSqrt2});
  case StateLabel::A: return CMatrix(2, 1, {kInvSqrt2, -kInvSqrt2});
  case StateLabel::R: return CMatrix(2, 1, {kInvSqrt2, complex_t(0.0, kInvSqrt2)});
  case StateLabel::L: return CMatrix(2, 1, {kInvSqrt2, complex_t(0.0, -kInvSqrt2)});
  }
  throw std::invalid_argument("state_ket: unknown label");
}

DensityMatrix state_density(StateLabel s) {
  return DensityMatrix::pure(state_ket(s));
}

std::string to_string(StateLabel s) {
  switch (s) {
  case StateLabel::H: return "H";
  case StateLabel::V: return "V";
  case StateLabel::D: return "D";
  case StateLabel::A: return "A";
  case StateLabel::R: return "R";
  case StateLabel::L: return "L";
  }
  throw std::invalid_argument("to_string: unknown label");
}

StateLabel state_from_string(const std::string &name) {
  if (name == "H") return StateLabel::H;
  if (name == "V") return StateLabel::V;
  if (name == "D") return StateLabel::D;
  if (name == "A") return StateLabel::A;
  if (name == "R") return StateLabel::R;
  if (name == "L") return StateLabel::L;
  throw std::invalid_argument("state_from_string: unknown state label '" + name + "'");
}

/*******************************************************************************
 *
 * Gate library
 *
 ******************************************************************************/

CMatrix gate(Gate g) {
  switch (g) {
  case Gate::Z:
    return CMatrix(2, 2, {1.0, 0.0, 0.0, -1.0});
  case Gate::H:
    return CMatrix(2, 2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
  case Gate::RY: {
    // exp(-i pi/8 sigma_y); the sign makes H = RY Z RY^dagger hold exactly.
    const double c = std::cos(M_PI / 8.0), s = std::sin(M_PI / 8.0);
    return CMatrix(2, 2, {c, -s, s, c});
  }
  case Gate::CZ: {
    CMatrix cz = CMatrix::identity(4);
    cz(3, 3) = -1.0;
    return cz;
  }
  }
  throw std::invalid_argument("gate: unknown gate");
}

CMatrix gate(const std::string &name) {
  if (name == "Z") return gate(Gate::Z);
  if (name == "H") return gate(Gate::H);
  if (name == "RY") return gate(Gate::RY);
  if (name == "CZ") return gate(Gate::CZ);
  throw std::invalid_argument("gate: unknown gate name '" + name + "'");
}

CMatrix gate_generic(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const complex_t i(0.0, 1.0);
  return CMatrix(2, 2,
                 {c, -std::exp(i * lambda) * s,
                  std::exp(i * phi) * s, std::exp(i * (phi + lambda)) * c});
}

} // namespace superchan
