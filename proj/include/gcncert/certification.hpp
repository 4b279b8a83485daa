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

#ifndef GCNCERT_CERTIFICATION_HPP_
#define GCNCERT_CERTIFICATION_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcncert/common.hpp"
#include "gcncert/graph_model.hpp"
#include "gcncert/interval_domain.hpp"
#include "gcncert/perturbation.hpp"
#include "gcncert/polyhedra_domain.hpp"

namespace gcncert {

enum class Method { kPolyTopK, kPolyMax, kIntervalTopK, kIntervalMax };

bool is_poly(Method method);
IntervalVariant interval_variant(Method method);
std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

struct CertifyOptions {
  Method method = Method::kPolyTopK;
  int threads = 1;
  // Lower ReLU slope when |up| < |lo|.
  double zero_lower_slope = 0.0;
  // Poly methods: raise each per-label margin to the interval margin
  // L_c - U_c' when that is larger (both are sound lower bounds).
  bool intersect_interval = true;
};

struct LabelMargin {
  int label = 0;        // competing label c'
  double margin = 0.0;  // certified lower bound on score[c] - score[c']
  FlipSet chosen;       // flips attaining the minimum of the lower form
};

struct NodeJudgment {
  int node = 0;
  int label = 0;  // label being defended
  double margin = 0.0;
  bool certified = false;  // margin > 0
  std::vector<LabelMargin> per_label;
};

struct Counterexample {
  int node = 0;
  FlipSet flips;
  int original_label = 0;
  int flipped_label = 0;
  bool verified = false;
};

// Single-row element bounding score[c] - score[c_other].
PolyNodeElement label_difference_transform(const PolyNodeElement& elem,
                                           int label, int other_label);

struct Minimization {
  double min_value = 0.0;
  FlipSet chosen;
};

// Exact minimum of the lower form of a single-row element over every
// admissible flip set, together with a minimizing flip set.
Minimization minimize_delta(const PolyNodeElement& elem,
                            const Matrix& features,
                            const PerturbationBudget& budget);

// Sound per-node judgments, defending the model's own predictions.
std::vector<NodeJudgment> certify_sound(const GcnModel& model,
                                        const Graph& graph,
                                        const PerturbationBudget& budget,
                                        const CertifyOptions& options = {});

// Same, defending arbitrary per-node labels (used for training).
std::vector<NodeJudgment> certify_sound_for_labels(
    const GcnModel& model, const Graph& graph,
    const PerturbationBudget& budget, const std::vector<int>& labels,
    const CertifyOptions& options = {});

// Tries the minimizer's flip sets of every competing label with a
// non-positive margin, most negative first, and returns the first one that
// changes the concrete prediction. Certified nodes return nullopt.
std::optional<Counterexample> generate_counterexample(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    const PerturbationBudget& budget, const NodeJudgment& judgment);

struct CertificationReport {
  std::vector<NodeJudgment> judgments;
  std::vector<std::optional<Counterexample>> counterexamples;

  // r'_i: 0 when a verified counterexample exists, 1 otherwise.
  Vector complete_bounds() const;
  double lower_ratio() const;
  double upper_ratio() const;
};

// Sound judgments plus verified counterexamples (poly methods only; the
// interval methods never produce counterexamples).
CertificationReport certify(const GcnModel& model, const Graph& graph,
                            const PerturbationBudget& budget,
                            const CertifyOptions& options = {});

Vector certify_complete(const GcnModel& model, const Graph& graph,
                        const PerturbationBudget& budget,
                        const CertifyOptions& options = {});

}  // namespace gcncert

#endif  // GCNCERT_CERTIFICATION_HPP_
