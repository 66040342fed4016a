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
#include <limits>

#include "superchan/cmatrix.hpp"
#include "testutil.hpp"

using namespace superchan;
using testutil::random_hermitian;
using testutil::random_matrix;
using testutil::random_psd;

namespace {
const CMatrix kSigmaZ(2, 2, {1.0, 0.0, 0.0, -1.0});
const CMatrix kProjH(2, 2, {1.0, 0.0, 0.0, 0.0});
const CMatrix kProjV(2, 2, {0.0, 0.0, 0.0, 1.0});
} // namespace

TEST_CASE("constructors reject invalid input") {
  CHECK_THROWS_AS(CMatrix(2, 2, cvector_t(3)), std::invalid_argument);
  CHECK_THROWS_AS(CMatrix(0, 2), std::invalid_argument);
  cvector_t bad = {1.0, 2.0, 3.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(CMatrix(2, 2, bad), std::invalid_argument);
  cvector_t inf = {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(CMatrix(2, 2, inf), std::invalid_argument);
}

TEST_CASE("kron identities") {
  const CMatrix i2 = CMatrix::identity(2);
  CHECK((kron(i2, i2) - CMatrix::identity(4)).frobenius_norm() == 0.0);

  const CMatrix zi = kron(kSigmaZ, i2);
  const CMatrix expect(4, 4,
                       {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1});
  CHECK((zi - expect).frobenius_norm() == 0.0);

  // |H><H| (x) |V><V| projects onto |HV>
  const CMatrix hv = kron(kProjH, kProjV);
  CHECK(hv.trace().real() == doctest::Approx(1.0));
  CHECK(hv(1, 1).real() == doctest::Approx(1.0));
  CHECK(hv.frobenius_norm() == doctest::Approx(1.0));
}

TEST_CASE("kron trace is multiplicative on random input") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = random_matrix(rng, 3, 3);
    const CMatrix b = random_matrix(rng, 2, 2);
    const complex_t lhs = kron(a, b).trace();
    const complex_t rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("partial trace of a product state") {
  std::mt19937_64 rng(13);
  const CMatrix rho = random_psd(rng, 2);
  const CMatrix sigma = random_psd(rng, 2);
  const CMatrix joint = kron(rho, sigma);
  const CMatrix reduced = partial_trace(joint, SubsystemShape{{2, 2}}, {1});
  const CMatrix expect = rho * sigma.trace();
  CHECK((reduced - expect).frobenius_norm() < 1e-12);
}

TEST_CASE("partial trace of the Bell state is maximally mixed") {
  const double r = 1.0 / std::sqrt(2.0);
  const CMatrix phi_plus(4, 1, {r, 0.0, 0.0, r});
  const CMatrix bell = phi_plus * phi_plus.adjoint();
  const CMatrix reduced = partial_trace(bell, SubsystemShape{{2, 2}}, {0});
  CHECK((reduced - CMatrix::identity(2) * complex_t(0.5, 0.0)).frobenius_norm() <
        1e-15);
}

TEST_CASE("tracing every subsystem leaves the scalar trace") {
  std::mt19937_64 rng(17);
  const CMatrix a = random_matrix(rng, 6, 6);
  const CMatrix full = partial_trace(a, SubsystemShape{{2, 3}}, {0, 1});
  CHECK(full.rows() == 1);
  CHECK(std::abs(full(0, 0) - a.trace()) < 1e-13);
}

TEST_CASE("partial trace preserves total trace on random input") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = random_matrix(rng, 8, 8);
    const CMatrix reduced = partial_trace(a, SubsystemShape{{2, 2, 2}}, {1});
    CHECK(std::abs(reduced.trace() - a.trace()) < 1e-12);
  }
}

TEST_CASE("partial trace rejects inconsistent shapes") {
  const CMatrix a = CMatrix::identity(4);
  CHECK_THROWS_AS(partial_trace(a, SubsystemShape{{2, 3}}, {0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(a, SubsystemShape{{2, 2}}, {2}),
                  std::invalid_argument);
}

TEST_CASE("vectorize stacks columns") {
  const CMatrix v = vectorize(CMatrix::identity(2));
  CHECK(v.rows() == 4);
  CHECK(v(0, 0).real() == 1.0);
  CHECK(v(1, 0).real() == 0.0);
  CHECK(v(2, 0).real() == 0.0);
  CHECK(v(3, 0).real() == 1.0);

  // |0><1| has its single entry at row 0, col 1 -> position col*rows + row.
  CMatrix e01(2, 2);
  e01(0, 1) = 1.0;
  const CMatrix ve = vectorize(e01);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(ve(k, 0).real() == (k == 2 ? 1.0 : 0.0));
}

TEST_CASE("devectorize inverts vectorize") {
  std::mt19937_64 rng(23);
  const CMatrix a = random_matrix(rng, 3, 3);
  CHECK((devectorize(vectorize(a)) - a).frobenius_norm() == 0.0);
  CHECK_THROWS_AS(devectorize(CMatrix(3, 1)), std::invalid_argument);
}

TEST_CASE("vectorize is linear and norm preserving") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = random_matrix(rng, 4, 4);
    const CMatrix b = random_matrix(rng, 4, 4);
    const complex_t c(0.3, -1.1);
    const CMatrix lhs = vectorize(a * c + b);
    const CMatrix rhs = vectorize(a) * c + vectorize(b);
    CHECK((lhs - rhs).frobenius_norm() < 1e-13);
    CHECK(vectorize(a).frobenius_norm() ==
          doctest::Approx(a.frobenius_norm()).epsilon(1e-13));
  }
}

TEST_CASE("herm_eig on sigma_z and the identity") {
  const HermEig ez = herm_eig(kSigmaZ);
  CHECK(ez.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(ez.eigenvalues[1] == doctest::Approx(1.0));

  const HermEig ei = herm_eig(CMatrix::identity(4));
  for (double lam : ei.eigenvalues)
    CHECK(lam == doctest::Approx(1.0));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(31);
  for (std::size_t n : {2u, 8u, 16u, 64u}) {
    const CMatrix h = random_hermitian(rng, n);
    const HermEig eig = herm_eig(h);
    // eigenvalues ascending
    for (std::size_t k = 1; k < n; ++k)
      CHECK(eig.eigenvalues[k] >= eig.eigenvalues[k - 1]);
    // unitarity
    const CMatrix vtv = eig.eigenvectors.adjoint() * eig.eigenvectors;
    CHECK((vtv - CMatrix::identity(n)).frobenius_norm() < 1e-10);
    // reconstruction
    CMatrix rec(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          rec(i, j) += eig.eigenvalues[k] * eig.eigenvectors(i, k) *
                       std::conj(eig.eigenvectors(j, k));
    CHECK((rec - h).frobenius_norm() < 1e-10 * std::max(1.0, h.frobenius_norm()));
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  std::mt19937_64 rng(37);
  CHECK_THROWS_AS(herm_eig(random_matrix(rng, 3, 3)), std::invalid_argument);
}

TEST_CASE("trace_norm, psd_sqrt, project_psd basics") {
  CHECK(trace_norm(kSigmaZ) == doctest::Approx(2.0));
  const CMatrix four_i = CMatrix::identity(2) * complex_t(4.0, 0.0);
  CHECK((psd_sqrt(four_i) - CMatrix::identity(2) * complex_t(2.0, 0.0))
            .frobenius_norm() < 1e-14);
  const CMatrix ind(2, 2, {1.0, 0.0, 0.0, -0.5});
  const CMatrix proj = project_psd(ind);
  CHECK(proj(0, 0).real() == doctest::Approx(1.0));
  CHECK(proj(1, 1).real() == doctest::Approx(0.0));
  CHECK_THROWS_AS(psd_sqrt(ind), std::invalid_argument);
}

TEST_CASE("trace_norm matches singular values of non-Hermitian input") {
  std::mt19937_64 rng(41);
  const CMatrix a = random_matrix(rng, 4, 4);
  // oracle: sum of sqrt eigenvalues of a^dag a
  double expect = 0.0;
  for (double lam : herm_eig(a.adjoint() * a).eigenvalues)
    expect += std::sqrt(std::max(0.0, lam));
  CHECK(trace_norm(a) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("project_psd is idempotent and fixes PSD input") {
  std::mt19937_64 rng(43);
  const CMatrix p = random_psd(rng, 4);
  CHECK((project_psd(p) - p).frobenius_norm() < 1e-12);
  const CMatrix h = random_hermitian(rng, 4);
  const CMatrix once = project_psd(h);
  CHECK((project_psd(once) - once).frobenius_norm() < 1e-12);
}

TEST_CASE("uhlmann fidelity closed forms") {
  // F(rho, rho) = (Tr rho)^2 for any PSD rho
  std::mt19937_64 rng(47);
  const CMatrix p = random_psd(rng, 3);
  const double tr = p.trace().real();
  CHECK(uhlmann_fidelity(p, p) == doctest::Approx(tr * tr).epsilon(1e-9));

  CHECK(uhlmann_fidelity(kProjH, kProjV) == doctest::Approx(0.0));
  const CMatrix half_i = CMatrix::identity(2) * complex_t(0.5, 0.0);
  CHECK(uhlmann_fidelity(kProjH, half_i) == doctest::Approx(0.5));
}

TEST_CASE("uhlmann fidelity is symmetric and bounded") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = random_psd(rng, 3);
    const CMatrix b = random_psd(rng, 3);
    const double fab = uhlmann_fidelity(a, b);
    const double fba = uhlmann_fidelity(b, a);
    CHECK(std::abs(fab - fba) < 1e-9);
    CHECK(fab >= 0.0);
    CHECK(fab <= a.trace().real() * b.trace().real() + 1e-9);
  }
  CHECK_THROWS_AS(
      uhlmann_fidelity(CMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}), kProjH),
      std::invalid_argument);
}

TEST_CASE("subsystem shape validation") {
  const SubsystemShape three{{2, 2, 2}};
  CHECK(three.product() == 8);
  const SubsystemShape degenerate{{2, 0}};
  CHECK_THROWS_AS(degenerate.product(), std::invalid_argument);
  const SubsystemShape s{{2, 2}};
  CHECK_THROWS_AS(s.check_matches(CMatrix(4, 3)), std::invalid_argument);
}
