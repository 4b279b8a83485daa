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

#include "gcncert/collective.hpp"

#include <string>

namespace gcncert {
namespace {

RobustLimit finish(int first_uncertified, int cap) {
  RobustLimit r;
  if (first_uncertified < 0) {
    r.limit = cap;
    r.capped = true;
  } else if (first_uncertified == 0) {
    r.never_certified = true;
  } else {
    r.limit = first_uncertified - 1;
  }
  return r;
}

}  // namespace

RobustLimit max_robust_limit(const GcnModel& model, const Graph& graph,
                             const PerturbationBudget& budget, int node,
                             int cap, const CertifyOptions& options) {
  if (cap < 0) throw DataError("search cap must be non-negative");
  if (node < 0 || node >= graph.num_nodes())
    throw DataError("node " + std::to_string(node) + " is out of range");
  PerturbationBudget b = budget;
  for (int g = 0; g <= cap; ++g) {
    b.global = g;
    const auto judgments = certify_sound(model, graph, b, options);
    if (!judgments[static_cast<std::size_t>(node)].certified)
      return finish(g, cap);
  }
  return finish(-1, cap);
}

RobustLimitVector max_robust_limits(const GcnModel& model, const Graph& graph,
                                    const PerturbationBudget& budget, int cap,
                                    const CertifyOptions& options) {
  if (cap < 0) throw DataError("search cap must be non-negative");
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  // first_fail[i] = smallest budget at which node i is not certified.
  std::vector<int> first_fail(n, -1);
  std::size_t open = n;
  PerturbationBudget b = budget;
  for (int g = 0; g <= cap && open > 0; ++g) {
    b.global = g;
    const auto judgments = certify_sound(model, graph, b, options);
    for (std::size_t i = 0; i < n; ++i) {
      if (first_fail[i] >= 0 || judgments[i].certified) continue;
      first_fail[i] = g;
      --open;
    }
  }
  RobustLimitVector out;
  out.search_cap = cap;
  out.limits.reserve(n);
  for (const int f : first_fail) out.limits.push_back(finish(f, cap));
  return out;
}

}  // namespace gcncert
