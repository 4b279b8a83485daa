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

#ifndef GCNCERT_ROBUST_TRAINING_HPP_
#define GCNCERT_ROBUST_TRAINING_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gcncert/certification.hpp"

namespace gcncert {

enum class LossKind { kBce, kHinge };

struct RobustLossConfig {
  LossKind kind = LossKind::kHinge;
  double hinge_threshold_labeled = std::log(90.0 / 10.0);
  double hinge_threshold_unlabeled = std::log(60.0 / 40.0);
  // Unlabeled nodes defend the model's current prediction; otherwise they
  // are left out of the loss.
  bool use_predicted_labels_for_unlabeled = true;
};

// -sum log(sigmoid(m)) over the margins.
double bce_loss(const Vector& margins);
// sum max(t - m, 0) over the margins.
double hinge_loss(const Vector& margins, double threshold);

// Mean per-node robust loss of the model. `labels[i]` is the ground-truth
// label of node i, or nullopt for an unlabeled node.
double robust_loss(const GcnModel& model, const Graph& graph,
                   const std::vector<std::optional<int>>& labels,
                   const PerturbationBudget& budget,
                   const RobustLossConfig& config,
                   const CertifyOptions& options = {});

std::size_t parameter_count(const GcnModel& model);
Vector flatten_parameters(const GcnModel& model);
void unflatten_parameters(const Vector& params, GcnModel& model);

inline constexpr std::size_t kMaxTrainableParameters = 2000;

struct TrainOptions {
  int steps = 0;
  double learning_rate = 0.0;
  double fd_step = 1e-4;
  std::uint64_t seed = 0;
  // Nodes drawn per step; 0 uses every node.
  int batch_size = 0;
  CertifyOptions certify;
};

struct TrainResult {
  GcnModel model;
  std::vector<double> loss_trace;  // batch loss before each step
};

// Plain gradient descent on the robust loss with central-difference
// gradients. Throws DataError when the model has more than
// kMaxTrainableParameters parameters.
TrainResult train_robust(const GcnModel& model, const Graph& graph,
                         const std::vector<std::optional<int>>& labels,
                         const PerturbationBudget& budget,
                         const RobustLossConfig& config,
                         const TrainOptions& options);

}  // namespace gcncert

#endif  // GCNCERT_ROBUST_TRAINING_HPP_
