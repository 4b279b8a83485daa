// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GCNCERT_COMMON_HPP_
#define GCNCERT_COMMON_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace gcncert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Shapes of operands do not chain.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data violates a domain invariant (non-binary feature, asymmetric
// adjacency, negative adjacency weight, ...).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The exhaustive perturbation enumerator would exceed its candidate cap.
class OracleInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// visited exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace gcncert

#endif  // GCNCERT_COMMON_HPP_
