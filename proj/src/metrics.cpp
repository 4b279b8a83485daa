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

#include "gcncert/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace gcncert {

double graph_robustness_ratio(const std::vector<NodeJudgment>& judgments) {
  if (judgments.empty()) throw DataError("robustness ratio of an empty graph");
  const auto certified =
      std::count_if(judgments.begin(), judgments.end(),
                    [](const NodeJudgment& j) { return j.certified; });
  return static_cast<double>(certified) /
         static_cast<double>(judgments.size());
}

double graph_robustness_ratio(const std::vector<bool>& robust) {
  if (robust.empty()) throw DataError("robustness ratio of an empty graph");
  const auto count = std::count(robust.begin(), robust.end(), true);
  return static_cast<double>(count) / static_cast<double>(robust.size());
}

double uncertainty_region(const RobustnessSweep& sweep) {
  if (sweep.lower.size() != sweep.upper.size() ||
      sweep.lower.size() != sweep.global_budgets.size())
    throw DataError("sweep vectors differ in length");
  double region = 0.0;
  for (std::size_t t = 0; t < sweep.lower.size(); ++t) {
    if (sweep.lower[t] > sweep.upper[t])
      throw DataError("lower bound exceeds upper bound at global budget " +
                      std::to_string(sweep.global_budgets[t]));
    region += sweep.upper[t] - sweep.lower[t];
  }
  return region;
}

RobustnessSweep run_sweep(const GcnModel& model, const Graph& graph,
                          const PerturbationBudget& base, int first_global,
                          int last_global, const CertifyOptions& options) {
  if (first_global < 0 || last_global < first_global)
    throw DataError("invalid global budget range");
  RobustnessSweep sweep;
  sweep.local_budget = base.local;
  PerturbationBudget b = base;
  for (int g = first_global; g <= last_global; ++g) {
    b.global = g;
    const auto start = std::chrono::steady_clock::now();
    const auto report = certify(model, graph, b, options);
    const auto stop = std::chrono::steady_clock::now();
    sweep.global_budgets.push_back(g);
    sweep.lower.push_back(report.lower_ratio());
    sweep.upper.push_back(report.upper_ratio());
    sweep.runtime_ms.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return sweep;
}

}  // namespace gcncert
