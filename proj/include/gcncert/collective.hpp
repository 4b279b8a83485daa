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

#ifndef GCNCERT_COLLECTIVE_HPP_
#define GCNCERT_COLLECTIVE_HPP_

#include <vector>

#include "gcncert/certification.hpp"

namespace gcncert {

struct RobustLimit {
  int limit = 0;                 // largest certified global budget
  bool never_certified = false;  // not certified even at global budget 0
  bool capped = false;           // still certified at the search cap
};

struct RobustLimitVector {
  std::vector<RobustLimit> limits;
  int search_cap = 0;
};

inline constexpr int kDefaultLimitCap = 100;

// Maximum robust limit of one node: the global budget is raised from 0 one
// step at a time while the sound certifier keeps certifying the node.
// budget.global is ignored; budget.local and budget.mode are kept.
RobustLimit max_robust_limit(const GcnModel& model, const Graph& graph,
                             const PerturbationBudget& budget, int node,
                             int cap = kDefaultLimitCap,
                             const CertifyOptions& options = {});

// The same search for every node, sharing one certification pass per
// budget.
RobustLimitVector max_robust_limits(const GcnModel& model, const Graph& graph,
                                    const PerturbationBudget& budget,
                                    int cap = kDefaultLimitCap,
                                    const CertifyOptions& options = {});

}  // namespace gcncert

#endif  // GCNCERT_COLLECTIVE_HPP_
