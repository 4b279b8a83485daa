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

#ifndef GCNCERT_METRICS_HPP_
#define GCNCERT_METRICS_HPP_

#include <vector>

#include "gcncert/certification.hpp"

namespace gcncert {

// Fraction of certified nodes. Throws DataError on an empty list.
double graph_robustness_ratio(const std::vector<NodeJudgment>& judgments);
// Fraction of true entries.
double graph_robustness_ratio(const std::vector<bool>& robust);

// Graph-level lower/upper robustness for a range of global budgets at a
// fixed local budget.
struct RobustnessSweep {
  int local_budget = 0;
  std::vector<int> global_budgets;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> runtime_ms;
};

// Sum over the listed budgets of (upper - lower). Throws DataError when a
// lower bound exceeds its upper bound or the vectors disagree in length.
double uncertainty_region(const RobustnessSweep& sweep);

// Runs `certify` for every global budget in [first_global, last_global].
RobustnessSweep run_sweep(const GcnModel& model, const Graph& graph,
                          const PerturbationBudget& base, int first_global,
                          int last_global, const CertifyOptions& options = {});

}  // namespace gcncert

#endif  // GCNCERT_METRICS_HPP_
