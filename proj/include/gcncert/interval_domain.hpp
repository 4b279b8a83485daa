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

#ifndef GCNCERT_INTERVAL_DOMAIN_HPP_
#define GCNCERT_INTERVAL_DOMAIN_HPP_

#include <vector>

#include "gcncert/common.hpp"
#include "gcncert/graph_model.hpp"
#include "gcncert/perturbation.hpp"

namespace gcncert {

// Entrywise bounds lower <= H <= upper on a latent feature matrix.
struct IntervalElement {
  Matrix lower;
  Matrix upper;

  bool contains(const Matrix& values, double tol = 0.0) const;
};

// How the first-layer bounds are obtained from the flip budget.
//   kTopK: per node the best `local` flips, then the best `global` of those.
//   kMax:  `global` times the single best candidate.
enum class IntervalVariant { kTopK, kMax };

// Bounds on A_hat * X' * W_0 + b_0 (before the first ReLU) over every
// admissible X'.
IntervalElement interval_input_abstraction(const GcnModel& model,
                                           const Graph& graph,
                                           const Matrix& norm_adj,
                                           const PerturbationBudget& budget,
                                           IntervalVariant variant);
IntervalElement interval_input_abstraction(const GcnModel& model,
                                           const Graph& graph,
                                           const PerturbationBudget& budget,
                                           IntervalVariant variant);

IntervalElement linear_interval(const IntervalElement& elem,
                                const Matrix& weight, const Vector& bias);

// Requires norm_adj >= 0 entrywise; throws DataError otherwise.
IntervalElement gc_interval(const IntervalElement& elem,
                            const Matrix& norm_adj);

IntervalElement relu_interval(const IntervalElement& elem);

// Pre-activation bounds of every layer: entry l bounds the input of layer
// l's ReLU; the last entry bounds the output scores.
std::vector<IntervalElement> interval_layer_bounds(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    const PerturbationBudget& budget, IntervalVariant variant);

// Per-node margins min_{c' != c} (L_{i,c} - U_{i,c'}) for the given labels.
Vector interval_margins(const IntervalElement& output,
                        const std::vector<int>& labels);

// Interval certifier: node i is certified iff the returned entry is > 0.
// Labels are the model's predictions on the unperturbed graph.
Vector interval_certify(const GcnModel& model, const Graph& graph,
                        const PerturbationBudget& budget,
                        IntervalVariant variant);

}  // namespace gcncert

#endif  // GCNCERT_INTERVAL_DOMAIN_HPP_
