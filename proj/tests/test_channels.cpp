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

#include "superchan/channels.hpp"
#include "testutil.hpp"

using namespace superchan;
using testutil::random_density;
using testutil::random_unitary;

namespace {

Channel identity_channel(std::size_t d = 2) {
  return choi_from_unitary(CMatrix::identity(d));
}

Channel depolarizing_channel() {
  return choi_from_map_action(
      [](std::size_t i, std::size_t j) {
        CMatrix out = CMatrix::identity(2);
        out *= complex_t(i == j ? 0.5 : 0.0, 0.0);
        return out;
      },
      2, 2);
}

} // namespace

TEST_CASE("identity Choi matrix is the unnormalized Bell state") {
  const Channel id = identity_channel();
  CHECK(id.choi.trace().real() == doctest::Approx(2.0));
  // sum_ij |ii><jj|
  CMatrix expect(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 1.0;
  CHECK((id.choi - expect).frobenius_norm() < 1e-15);
}

TEST_CASE("fully depolarizing map has Choi I/2") {
  const Channel dep = depolarizing_channel();
  CHECK((dep.choi - CMatrix::identity(4) * complex_t(0.5, 0.0)).frobenius_norm() <
        1e-15);
  CHECK(is_cp(dep));
  CHECK(is_tp(dep));
}

TEST_CASE("sigma_x conjugation has rank-1 trace-2 Choi") {
  const CMatrix sx(2, 2, {0.0, 1.0, 1.0, 0.0});
  const Channel ch = choi_from_map_action(
      [&](std::size_t i, std::size_t j) {
        CMatrix unit(2, 2);
        unit(i, j) = 1.0;
        return sx * unit * sx;
      },
      2, 2);
  CHECK(ch.choi.trace().real() == doctest::Approx(2.0));
  const HermEig eig = herm_eig(ch.choi);
  CHECK(eig.eigenvalues.back() == doctest::Approx(2.0));
  for (std::size_t k = 0; k + 1 < eig.eigenvalues.size(); ++k)
    CHECK(std::abs(eig.eigenvalues[k]) < 1e-12);
}

TEST_CASE("choi_from_unitary matches the basis-image construction") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    const CMatrix u = random_unitary(rng, 2);
    const Channel direct = choi_from_unitary(u);
    const Channel via_action = choi_from_map_action(
        [&](std::size_t i, std::size_t j) {
          CMatrix unit(2, 2);
          unit(i, j) = 1.0;
          return u * unit * u.adjoint();
        },
        2, 2);
    CHECK((direct.choi - via_action.choi).frobenius_norm() < 1e-12);
  }
}

TEST_CASE("choi_from_unitary on sigma_z") {
  const Channel ch = choi_from_unitary(gate(Gate::Z));
  // support on |00>, |11> with relative phase -1
  CHECK(ch.choi(0, 0).real() == doctest::Approx(1.0));
  CHECK(ch.choi(3, 3).real() == doctest::Approx(1.0));
  CHECK(ch.choi(0, 3).real() == doctest::Approx(-1.0));
  CHECK(ch.choi.trace().real() == doctest::Approx(2.0));
}

TEST_CASE("choi_from_unitary rejects non-unitary input") {
  CHECK_THROWS_AS(choi_from_unitary(CMatrix(2, 2, {1.0, 0.0, 0.0, 0.5})),
                  std::invalid_argument);
}

TEST_CASE("apply_channel on identity, Z and depolarizing") {
  std::mt19937_64 rng(67);
  const DensityMatrix rho = random_density(rng, 2);
  CHECK((apply_channel(identity_channel(), rho) - rho.mat()).frobenius_norm() <
        1e-13);

  // Z maps |D><D| to |A><A|
  const Channel z = choi_from_unitary(gate(Gate::Z));
  const CMatrix out = apply_channel(z, state_density(StateLabel::D));
  CHECK((out - state_density(StateLabel::A).mat()).frobenius_norm() < 1e-14);

  const CMatrix dep_out = apply_channel(depolarizing_channel(), rho);
  CHECK((dep_out - CMatrix::identity(2) * complex_t(0.5, 0.0)).frobenius_norm() <
        1e-13);
}

TEST_CASE("cp/tp flags") {
  const Channel id = identity_channel();
  CHECK(is_cp(id));
  CHECK(is_tp(id));

  const Channel neg(CMatrix::identity(4) * complex_t(-1.0, 0.0), 2, 2);
  CHECK_FALSE(is_cp(neg));

  const Channel doubled(id.choi * complex_t(2.0, 0.0), 2, 2);
  CHECK(is_cp(doubled));
  CHECK_FALSE(is_tp(doubled));
}

TEST_CASE("unitary Chois are rank-1 CP TP") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 10; ++t) {
    const Channel ch = choi_from_unitary(random_unitary(rng, 2));
    CHECK(is_cp(ch));
    CHECK(is_tp(ch));
    const HermEig eig = herm_eig(ch.choi);
    CHECK(eig.eigenvalues.back() == doctest::Approx(2.0));
    CHECK(std::abs(eig.eigenvalues[eig.eigenvalues.size() - 2]) < 1e-12);
  }
}

TEST_CASE("apply_channel is linear in the state") {
  std::mt19937_64 rng(73);
  const Channel ch = choi_from_unitary(random_unitary(rng, 2));
  const DensityMatrix a = random_density(rng, 2);
  const DensityMatrix b = random_density(rng, 2);
  const double lam = 0.3;
  const CMatrix mix = a.mat() * complex_t(lam, 0.0) +
                      b.mat() * complex_t(1.0 - lam, 0.0);
  const CMatrix lhs = apply_channel(ch, mix);
  const CMatrix rhs = apply_channel(ch, a.mat()) * complex_t(lam, 0.0) +
                      apply_channel(ch, b.mat()) * complex_t(1.0 - lam, 0.0);
  CHECK((lhs - rhs).frobenius_norm() < 1e-12);
}

TEST_CASE("composition consistency of unitary channels") {
  std::mt19937_64 rng(79);
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = random_unitary(rng, 2);
    const CMatrix v = random_unitary(rng, 2);
    const DensityMatrix rho = random_density(rng, 2);
    const CMatrix seq =
        apply_channel(choi_from_unitary(v),
                      apply_channel(choi_from_unitary(u), rho.mat()));
    const CMatrix direct = apply_channel(choi_from_unitary(v * u), rho.mat());
    CHECK((seq - direct).frobenius_norm() < 1e-12);
  }
}

TEST_CASE("Choi trace equals Tr E(I) for both construction paths") {
  std::mt19937_64 rng(83);
  const CMatrix u = random_unitary(rng, 2);
  CHECK(choi_from_unitary(u).choi.trace().real() == doctest::Approx(2.0));
  const Channel dep = depolarizing_channel();
  CHECK(dep.choi.trace().real() == doctest::Approx(2.0));
}

TEST_CASE("gate library fixed points") {
  const CMatrix z2 = gate(Gate::Z) * gate(Gate::Z);
  CHECK((z2 - CMatrix::identity(2)).frobenius_norm() < 1e-15);

  const CMatrix cz = gate(Gate::CZ);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j)
        CHECK(std::abs(cz(i, j)) == 0.0);
      else
        CHECK(cz(i, i).real() == doctest::Approx(i == 3 ? -1.0 : 1.0));
    }

  // The identity pinning RY's angle convention.
  const CMatrix r = gate(Gate::RY);
  CHECK((r * gate(Gate::Z) * r.adjoint() - gate(Gate::H)).frobenius_norm() <
        1e-12);

  CHECK_THROWS_AS(gate("X"), std::invalid_argument);
}

TEST_CASE("generic gate reduces to the fixed gates") {
  CHECK((gate_generic(0.0, 0.0, M_PI) - gate(Gate::Z)).frobenius_norm() < 1e-15);
  CHECK((gate_generic(M_PI / 2.0, 0.0, M_PI) - gate(Gate::H)).frobenius_norm() <
        1e-15);
  // unitarity for arbitrary angles
  const CMatrix u = gate_generic(0.7, 1.2, -0.4);
  CHECK((u.adjoint() * u - CMatrix::identity(2)).frobenius_norm() < 1e-14);
}

TEST_CASE("polarization states and labels") {
  CHECK(state_from_string("D") == StateLabel::D);
  CHECK(to_string(StateLabel::L) == "L");
  CHECK_THROWS_AS(state_from_string("Q"), std::invalid_argument);
  CHECK(complement_label(StateLabel::R) == StateLabel::L);

  // conjugation swaps R and L
  const CMatrix conj_r = state_density(StateLabel::R).mat().conjugate();
  CHECK((conj_r - state_density(StateLabel::L).mat()).frobenius_norm() < 1e-15);

  for (StateLabel s : six_state_labels()) {
    const DensityMatrix rho = state_density(s);
    CHECK(rho.is_pure());
    const DensityMatrix comp = state_density(complement_label(s));
    CHECK(std::abs(hs_inner(rho.mat(), comp.mat())) < 1e-15);
  }
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(CMatrix(2, 2, {1.0, 0.0, 0.0, 1.0})),
                  std::invalid_argument); // trace 2
  CHECK_THROWS_AS(DensityMatrix(CMatrix(2, 2, {1.5, 0.0, 0.0, -0.5})),
                  std::invalid_argument); // not PSD
  CHECK_THROWS_AS(DensityMatrix(CMatrix(2, 2, {0.5, 0.3, 0.1, 0.5})),
                  std::invalid_argument); // not Hermitian
  const DensityMatrix mixed(CMatrix(2, 2, {0.5, 0.0, 0.0, 0.5}));
  CHECK(mixed.purity() == doctest::Approx(0.5));
  CHECK_FALSE(mixed.is_pure());
}
