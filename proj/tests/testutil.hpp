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

// Seeded random matrix generators shared by the test suites.

#ifndef SUPERCHAN_TESTS_TESTUTIL_HPP_
#define SUPERCHAN_TESTS_TESTUTIL_HPP_

#include <random>

#include "superchan/channels.hpp"

namespace superchan::testutil {

inline CMatrix random_matrix(std::mt19937_64 &rng, std::size_t n,
                             std::size_t m) {
  std::normal_distribution<double> g;
  CMatrix a(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a(i, j) = complex_t(g(rng), g(rng));
  return a;
}

inline CMatrix random_hermitian(std::mt19937_64 &rng, std::size_t n) {
  const CMatrix g = random_matrix(rng, n, n);
  return (g + g.adjoint()) * complex_t(0.5, 0.0);
}

inline CMatrix random_psd(std::mt19937_64 &rng, std::size_t n) {
  const CMatrix g = random_matrix(rng, n, n);
  return g * g.adjoint();
}

inline DensityMatrix random_density(std::mt19937_64 &rng, std::size_t n) {
  const CMatrix p = random_psd(rng, n);
  return DensityMatrix(p * complex_t(1.0 / p.trace().real(), 0.0));
}

inline DensityMatrix random_pure(std::mt19937_64 &rng, std::size_t n) {
  const CMatrix v = random_matrix(rng, n, 1);
  return DensityMatrix::pure(v * complex_t(1.0 / v.frobenius_norm(), 0.0));
}

// Gram-Schmidt of a Ginibre sample; fine at these dimensions.
inline CMatrix random_unitary(std::mt19937_64 &rng, std::size_t n) {
  CMatrix g = random_matrix(rng, n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t b = 0; b < c; ++b) {
      complex_t ip = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        ip += std::conj(g(r, b)) * g(r, c);
      for (std::size_t r = 0; r < n; ++r)
        g(r, c) -= ip * g(r, b);
    }
    double nn = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      nn += std::norm(g(r, c));
    nn = std::sqrt(nn);
    for (std::size_t r = 0; r < n; ++r)
      g(r, c) = g(r, c) / nn;
  }
  return g;
}

} // namespace superchan::testutil

#endif
