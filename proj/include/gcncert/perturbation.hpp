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

#ifndef GCNCERT_PERTURBATION_HPP_
#define GCNCERT_PERTURBATION_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

#include "gcncert/common.hpp"
#include "gcncert/graph_model.hpp"

namespace gcncert {

// Which flip directions are admissible. kAddOnly allows 0 -> 1 only,
// kDeleteOnly allows 1 -> 0 only.
enum class FlipMode { kBoth, kAddOnly, kDeleteOnly };

struct PerturbationBudget {
  int local = 0;   // max flips per node
  int global = 0;  // max flips over the whole graph
  FlipMode mode = FlipMode::kBoth;

  int effective_local() const { return local < global ? local : global; }
  // Whether a feature currently holding `value` may be flipped.
  bool allows_flip(double value) const;
  void validate() const;
};

// One flipped entry of the feature matrix.
struct FeatureIndex {
  int node = 0;
  int feature = 0;

  auto operator<=>(const FeatureIndex&) const = default;
};

// Sorted, duplicate-free list of flipped entries.
using FlipSet = std::vector<FeatureIndex>;

// +1 where the feature is 0, -1 where it is 1.
Matrix sign_matrix(const Matrix& features);

// Flips every listed entry. Throws DataError on out-of-range or duplicate
// indices.
Matrix apply_flips(const Matrix& features, const FlipSet& flips);

// True when `flips` is in range and respects all budget constraints.
bool within_budget(const Matrix& features, const FlipSet& flips,
                   const PerturbationBudget& budget);

inline constexpr std::uint64_t kDefaultOracleCap = 10'000'000;

// Cap for the exhaustive oracle; GCNCERT_ORACLE_CAP overrides the default.
std::uint64_t oracle_cap_from_env();

// Number of admissible flip sets, saturating at UINT64_MAX.
std::uint64_t count_perturbations(const Matrix& features,
                                  const PerturbationBudget& budget);

// Visits every admissible flip set exactly once, the empty set first, then
// by cardinality and lexicographically within a cardinality. Returning false
// from `visit` stops the enumeration. Throws OracleInfeasible if the number
// of sets exceeds `cap`.
void enumerate_perturbations(const Matrix& features,
                             const PerturbationBudget& budget,
                             const std::function<bool(const FlipSet&)>& visit,
                             std::uint64_t cap = kDefaultOracleCap);

// Exact single-node robustness: the predicted label of `node` is the same
// for every admissible perturbed feature matrix.
bool exact_node_robustness(const GcnModel& model, const Graph& graph,
                           const PerturbationBudget& budget, int node,
                           std::uint64_t cap = kDefaultOracleCap);

// Exact robustness of every node from a single enumeration.
std::vector<bool> exact_robustness(const GcnModel& model, const Graph& graph,
                                   const PerturbationBudget& budget,
                                   std::uint64_t cap = kDefaultOracleCap);

// For every node, the largest global budget g <= max_global such that the
// node is exactly robust under (budget.local, g, budget.mode). budget.global
// is ignored. A value of max_global means no admissible flip set of size
// <= max_global changes the label.
std::vector<int> exact_max_robust_budget(const GcnModel& model,
                                         const Graph& graph,
                                         const PerturbationBudget& budget,
                                         int max_global,
                                         std::uint64_t cap = kDefaultOracleCap);

}  // namespace gcncert

#endif  // GCNCERT_PERTURBATION_HPP_
