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

#include "gcncert/robust_training.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace gcncert {
namespace {

// -log(sigmoid(m)) without overflow for large |m|.
double neg_log_sigmoid(double m) {
  return std::max(-m, 0.0) + std::log1p(std::exp(-std::abs(m)));
}

struct Targets {
  std::vector<int> labels;        // label defended by each node
  std::vector<double> threshold;  // hinge threshold per node
  std::vector<bool> included;
};

Targets make_targets(const GcnModel& model, const Graph& graph,
                     const std::vector<std::optional<int>>& labels,
                     const RobustLossConfig& config) {
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  if (labels.size() != n)
    throw DimensionError("one (optional) label per node is required");
  const auto predicted = predict(model, graph).labels;
  Targets t;
  t.labels.resize(n);
  t.threshold.resize(n);
  t.included.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i]) {
      t.labels[i] = *labels[i];
      t.threshold[i] = config.hinge_threshold_labeled;
      t.included[i] = true;
    } else {
      t.labels[i] = predicted[i];
      t.threshold[i] = config.hinge_threshold_unlabeled;
      t.included[i] = config.use_predicted_labels_for_unlabeled;
    }
  }
  return t;
}

double batch_loss(const GcnModel& model, const Graph& graph,
                  const Targets& targets, const std::vector<int>& batch,
                  const PerturbationBudget& budget,
                  const RobustLossConfig& config,
                  const CertifyOptions& options) {
  const auto judgments =
      certify_sound_for_labels(model, graph, budget, targets.labels, options);
  double total = 0.0;
  int counted = 0;
  for (const int node : batch) {
    const auto i = static_cast<std::size_t>(node);
    if (!targets.included[i]) continue;
    Vector margins(static_cast<Eigen::Index>(judgments[i].per_label.size()));
    for (std::size_t c = 0; c < judgments[i].per_label.size(); ++c)
      margins(static_cast<Eigen::Index>(c)) = judgments[i].per_label[c].margin;
    total += config.kind == LossKind::kBce
                 ? bce_loss(margins)
                 : hinge_loss(margins, targets.threshold[i]);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / counted;
}

}  // namespace

double bce_loss(const Vector& margins) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < margins.size(); ++c)
    s += neg_log_sigmoid(margins(c));
  return s;
}

double hinge_loss(const Vector& margins, double threshold) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < margins.size(); ++c)
    s += std::max(threshold - margins(c), 0.0);
  return s;
}

double robust_loss(const GcnModel& model, const Graph& graph,
                   const std::vector<std::optional<int>>& labels,
                   const PerturbationBudget& budget,
                   const RobustLossConfig& config,
                   const CertifyOptions& options) {
  const auto targets = make_targets(model, graph, labels, config);
  std::vector<int> all(static_cast<std::size_t>(graph.num_nodes()));
  std::iota(all.begin(), all.end(), 0);
  return batch_loss(model, graph, targets, all, budget, config, options);
}

std::size_t parameter_count(const GcnModel& model) {
  std::size_t count = 0;
  for (const auto& layer : model.layers)
    count += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  return count;
}

Vector flatten_parameters(const GcnModel& model) {
  Vector params(static_cast<Eigen::Index>(parameter_count(model)));
  Eigen::Index at = 0;
  for (const auto& layer : model.layers) {
    params.segment(at, layer.weight.size()) = layer.weight.reshaped();
    at += layer.weight.size();
    params.segment(at, layer.bias.size()) = layer.bias;
    at += layer.bias.size();
  }
  return params;
}

void unflatten_parameters(const Vector& params, GcnModel& model) {
  if (static_cast<std::size_t>(params.size()) != parameter_count(model))
    throw DimensionError("parameter vector does not match the model");
  Eigen::Index at = 0;
  for (auto& layer : model.layers) {
    layer.weight.reshaped() = params.segment(at, layer.weight.size());
    at += layer.weight.size();
    layer.bias = params.segment(at, layer.bias.size());
    at += layer.bias.size();
  }
}

TrainResult train_robust(const GcnModel& model, const Graph& graph,
                         const std::vector<std::optional<int>>& labels,
                         const PerturbationBudget& budget,
                         const RobustLossConfig& config,
                         const TrainOptions& options) {
  graph.validate();
  model.validate_for(graph.num_features());
  budget.validate();
  const std::size_t count = parameter_count(model);
  if (count > kMaxTrainableParameters)
    throw DataError("model has " + std::to_string(count) +
                    " parameters; finite-difference training supports at most " +
                    std::to_string(kMaxTrainableParameters) +
                    " (reduce layer widths or feature count)");
  if (options.steps < 0) throw DataError("steps must be non-negative");

  TrainResult result{model, {}};
  if (options.steps == 0) return result;

  std::mt19937_64 rng(options.seed);
  const int n = graph.num_nodes();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  CertifyOptions inner = options.certify;
  inner.threads = 1;
  Vector params = flatten_parameters(model);
  Vector grad(params.size());

  for (int step = 0; step < options.steps; ++step) {
    std::vector<int> batch = order;
    if (options.batch_size > 0 && options.batch_size < n) {
      std::shuffle(batch.begin(), batch.end(), rng);
      batch.resize(static_cast<std::size_t>(options.batch_size));
      std::sort(batch.begin(), batch.end());
    }
    // Predicted labels of unlabeled nodes are frozen for the whole step so
    // the loss stays continuous in the parameters.
    const auto targets = make_targets(result.model, graph, labels, config);
    result.loss_trace.push_back(batch_loss(result.model, graph, targets, batch,
                                           budget, config, inner));
    if (options.learning_rate == 0.0) continue;

    parallel_for(static_cast<std::size_t>(params.size()),
                 options.certify.threads, [&](std::size_t p) {
                   GcnModel probe = result.model;
                   Vector shifted = params;
                   const auto idx = static_cast<Eigen::Index>(p);
                   shifted(idx) = params(idx) + options.fd_step;
                   unflatten_parameters(shifted, probe);
                   const double plus = batch_loss(probe, graph, targets, batch,
                                                  budget, config, inner);
                   shifted(idx) = params(idx) - options.fd_step;
                   unflatten_parameters(shifted, probe);
                   const double minus = batch_loss(probe, graph, targets, batch,
                                                   budget, config, inner);
                   grad(idx) = (plus - minus) / (2.0 * options.fd_step);
                 });
    params -= options.learning_rate * grad;
    unflatten_parameters(params, result.model);
  }
  return result;
}

}  // namespace gcncert
