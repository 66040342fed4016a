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
 * @file    types.hpp
 * @brief   Common scalar types and error categories
 */

#ifndef SUPERCHAN_TYPES_HPP_
#define SUPERCHAN_TYPES_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace superchan {

using complex_t = std::complex<double>;
using cvector_t = std::vector<complex_t>;
using rvector_t = std::vector<double>;

/**
 * Raised when input files or datasets are malformed or inconsistent
 * (distinct from bad configuration, which uses std::invalid_argument).
 */
class data_error : public std::runtime_error {
public:
  explicit data_error(const std::string &msg) : std::runtime_error(msg) {}
};

/**
 * Raised when an iterative solver fails to reach its certified tolerance.
 * Carries the residual/gap that was actually achieved.
 */
class solver_error : public std::runtime_error {
public:
  solver_error(const std::string &msg, double achieved)
      : std::runtime_error(msg), achieved_residual(achieved) {}
  double achieved_residual;
};

} // namespace superchan

#endif
