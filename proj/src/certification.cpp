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

#include "gcncert/certification.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <tuple>

namespace gcncert {

bool is_poly(Method method) {
  return method == Method::kPolyTopK || method == Method::kPolyMax;
}

IntervalVariant interval_variant(Method method) {
  return (method == Method::kPolyMax || method == Method::kIntervalMax)
             ? IntervalVariant::kMax
             : IntervalVariant::kTopK;
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kPolyTopK:
      return "poly-topk";
    case Method::kPolyMax:
      return "poly-max";
    case Method::kIntervalTopK:
      return "interval-topk";
    case Method::kIntervalMax:
      return "interval-max";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kPolyTopK, Method::kPolyMax, Method::kIntervalTopK,
                   Method::kIntervalMax})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

PolyNodeElement label_difference_transform(const PolyNodeElement& elem,
                                           int label, int other_label) {
  if (label == other_label)
    throw DataError("label difference needs two distinct labels");
  if (label < 0 || other_label < 0 || label >= elem.rows() ||
      other_label >= elem.rows())
    throw DimensionError("label index out of range");
  Matrix diff = Matrix::Zero(elem.rows(), 1);
  diff(label, 0) = 1.0;
  diff(other_label, 0) = -1.0;
  return linear_poly(elem, diff, Vector::Zero(1));
}

Minimization minimize_delta(const PolyNodeElement& elem,
                            const Matrix& features,
                            const PerturbationBudget& budget) {
  if (elem.rows() != 1)
    throw DimensionError("minimize_delta expects a single-row element");
  budget.validate();
  Minimization result;
  result.min_value = elem.lower_at(features)(0);

  using Candidate = std::pair<double, FeatureIndex>;
  std::vector<Candidate> pooled;
  std::vector<Candidate> node_cands;
  const int per_node = budget.effective_local();
  // vars are sorted, so each node's variables form one contiguous run.
  std::size_t v = 0;
  while (v < elem.vars.size()) {
    const int node = elem.vars[v].node;
    node_cands.clear();
    for (; v < elem.vars.size() && elem.vars[v].node == node; ++v) {
      const auto& idx = elem.vars[v];
      const double x = features(idx.node, idx.feature);
      if (!budget.allows_flip(x)) continue;
      const double change =
          elem.lower_coef(0, static_cast<Eigen::Index>(v)) *
          (x == 0.0 ? 1.0 : -1.0);
      if (change < 0.0) node_cands.emplace_back(change, idx);
    }
    std::sort(node_cands.begin(), node_cands.end());
    const auto take = std::min<std::size_t>(node_cands.size(),
                                            static_cast<std::size_t>(per_node));
    pooled.insert(pooled.end(), node_cands.begin(),
                  node_cands.begin() + static_cast<long>(take));
  }
  std::sort(pooled.begin(), pooled.end());
  const auto take = std::min<std::size_t>(
      pooled.size(), static_cast<std::size_t>(budget.global));
  for (std::size_t t = 0; t < take; ++t) {
    result.min_value += pooled[t].first;
    result.chosen.push_back(pooled[t].second);
  }
  std::sort(result.chosen.begin(), result.chosen.end());
  return result;
}

std::vector<NodeJudgment> certify_sound_for_labels(
    const GcnModel& model, const Graph& graph,
    const PerturbationBudget& budget, const std::vector<int>& labels,
    const CertifyOptions& options) {
  graph.validate();
  model.validate_for(graph.num_features());
  budget.validate();
  const int n = graph.num_nodes();
  const int classes = model.num_classes();
  if (static_cast<int>(labels.size()) != n)
    throw DimensionError("one label per node is required");
  for (const int c : labels)
    if (c < 0 || c >= classes) throw DataError("label out of range");

  const Matrix norm_adj = normalize_adjacency(graph);
  const auto bounds = interval_layer_bounds(model, graph, norm_adj, budget,
                                            interval_variant(options.method));
  std::vector<NodeJudgment> out(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t i) {
    const int node = static_cast<int>(i);
    NodeJudgment& j = out[i];
    j.node = node;
    j.label = labels[i];
    j.margin = std::numeric_limits<double>::infinity();
    std::optional<PolyNodeElement> output;
    if (is_poly(options.method))
      output = back_substitute(model, graph, norm_adj, node, bounds,
                               options.zero_lower_slope);
    for (int other = 0; other < classes; ++other) {
      if (other == j.label) continue;
      LabelMargin lm;
      lm.label = other;
      if (output) {
        auto m = minimize_delta(
            label_difference_transform(*output, j.label, other),
            graph.features, budget);
        lm.margin = m.min_value;
        lm.chosen = std::move(m.chosen);
        if (options.intersect_interval)
          lm.margin = std::max(lm.margin, bounds.back().lower(node, j.label) -
                                              bounds.back().upper(node, other));
      } else {
        lm.margin = bounds.back().lower(node, j.label) -
                    bounds.back().upper(node, other);
      }
      j.margin = std::min(j.margin, lm.margin);
      j.per_label.push_back(std::move(lm));
    }
    j.certified = j.margin > 0.0;
  });
  return out;
}

std::vector<NodeJudgment> certify_sound(const GcnModel& model,
                                        const Graph& graph,
                                        const PerturbationBudget& budget,
                                        const CertifyOptions& options) {
  graph.validate();
  return certify_sound_for_labels(model, graph, budget,
                                  predict(model, graph).labels, options);
}

std::optional<Counterexample> generate_counterexample(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    const PerturbationBudget& budget, const NodeJudgment& judgment) {
  if (judgment.certified) return std::nullopt;
  std::vector<const LabelMargin*> order;
  for (const auto& lm : judgment.per_label)
    if (lm.margin <= 0.0 && !lm.chosen.empty()) order.push_back(&lm);
  std::stable_sort(order.begin(), order.end(),
                   [](const LabelMargin* a, const LabelMargin* b) {
                     return a->margin < b->margin;
                   });
  for (const LabelMargin* lm : order) {
    if (!within_budget(graph.features, lm->chosen, budget)) continue;
    const Matrix scores =
        forward(model, norm_adj, apply_flips(graph.features, lm->chosen));
    const int label = argmax_row(scores.row(judgment.node));
    if (label != judgment.label)
      return Counterexample{judgment.node, lm->chosen, judgment.label, label,
                            true};
  }
  return std::nullopt;
}

Vector CertificationReport::complete_bounds() const {
  Vector r = Vector::Ones(static_cast<Eigen::Index>(counterexamples.size()));
  for (std::size_t i = 0; i < counterexamples.size(); ++i)
    if (counterexamples[i] && counterexamples[i]->verified)
      r(static_cast<Eigen::Index>(i)) = 0.0;
  return r;
}

double CertificationReport::lower_ratio() const {
  if (judgments.empty()) throw DataError("no judgments");
  const auto certified =
      std::count_if(judgments.begin(), judgments.end(),
                    [](const NodeJudgment& j) { return j.certified; });
  return static_cast<double>(certified) /
         static_cast<double>(judgments.size());
}

double CertificationReport::upper_ratio() const {
  if (counterexamples.empty()) throw DataError("no judgments");
  return complete_bounds().mean();
}

CertificationReport certify(const GcnModel& model, const Graph& graph,
                            const PerturbationBudget& budget,
                            const CertifyOptions& options) {
  CertificationReport report;
  report.judgments = certify_sound(model, graph, budget, options);
  report.counterexamples.resize(report.judgments.size());
  if (!is_poly(options.method)) return report;
  const Matrix norm_adj = normalize_adjacency(graph);
  parallel_for(report.judgments.size(), options.threads, [&](std::size_t i) {
    report.counterexamples[i] = generate_counterexample(
        model, graph, norm_adj, budget, report.judgments[i]);
  });
  return report;
}

Vector certify_complete(const GcnModel& model, const Graph& graph,
                        const PerturbationBudget& budget,
                        const CertifyOptions& options) {
  return certify(model, graph, budget, options).complete_bounds();
}

}  // namespace gcncert
