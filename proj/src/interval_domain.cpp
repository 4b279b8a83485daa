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

#include "gcncert/interval_domain.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

namespace gcncert {
namespace {

// Sum of the `count` largest entries of `values` (all of them if fewer).
double sum_of_largest(std::vector<double>& values, int count) {
  const auto k = std::min<std::size_t>(values.size(),
                                       static_cast<std::size_t>(count));
  std::partial_sort(values.begin(), values.begin() + static_cast<long>(k),
                    values.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t t = 0; t < k; ++t) s += values[t];
  return s;
}

}  // namespace

bool IntervalElement::contains(const Matrix& values, double tol) const {
  if (values.rows() != lower.rows() || values.cols() != lower.cols())
    return false;
  return ((values - lower).array() >= -tol).all() &&
         ((upper - values).array() >= -tol).all();
}

IntervalElement interval_input_abstraction(const GcnModel& model,
                                           const Graph& graph,
                                           const Matrix& norm_adj,
                                           const PerturbationBudget& budget,
                                           IntervalVariant variant) {
  model.validate_for(graph.num_features());
  budget.validate();
  const auto& layer = model.layers.front();
  const Matrix& x = graph.features;
  const Eigen::Index n = x.rows();
  const Eigen::Index m0 = x.cols();
  const Eigen::Index width = layer.weight.cols();

  Matrix exact = (norm_adj * x) * layer.weight;
  exact.rowwise() += layer.bias.transpose();

  const Matrix sign = sign_matrix(x);
  const int per_node = budget.effective_local();

  // Single best increase / decrease of (X' W)[k, j] from one admissible
  // flip of node k, used by the Max variant.
  Matrix best_up = Matrix::Zero(n, width);
  Matrix best_down = Matrix::Zero(n, width);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < width; ++j) {
      for (Eigen::Index f = 0; f < m0; ++f) {
        if (!budget.allows_flip(x(k, f))) continue;
        const double change = sign(k, f) * layer.weight(f, j);
        best_up(k, j) = std::max(best_up(k, j), change);
        best_down(k, j) = std::max(best_down(k, j), -change);
      }
    }
  }

  IntervalElement out{exact, exact};
  if (budget.global == 0 || per_node == 0) return out;

  std::vector<double> ups, downs, cand_up, cand_down;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < width; ++j) {
      if (variant == IntervalVariant::kMax) {
        double top_up = 0.0, top_down = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double a = norm_adj(i, k);
          if (a <= 0.0) continue;
          top_up = std::max(top_up, a * best_up(k, j));
          top_down = std::max(top_down, a * best_down(k, j));
        }
        out.upper(i, j) += budget.global * top_up;
        out.lower(i, j) -= budget.global * top_down;
        continue;
      }
      // TopK: the per-node top `local` changes of every neighbour, scaled by
      // the adjacency weight, then the top `global` of the pooled list.
      cand_up.clear();
      cand_down.clear();
      for (Eigen::Index k = 0; k < n; ++k) {
        const double a = norm_adj(i, k);
        if (a <= 0.0) continue;
        ups.clear();
        downs.clear();
        for (Eigen::Index f = 0; f < m0; ++f) {
          if (!budget.allows_flip(x(k, f))) continue;
          const double change = sign(k, f) * layer.weight(f, j);
          if (change > 0.0) ups.push_back(change);
          if (change < 0.0) downs.push_back(-change);
        }
        const auto take = [&](std::vector<double>& src,
                              std::vector<double>& dst) {
          const auto kk = std::min<std::size_t>(
              src.size(), static_cast<std::size_t>(per_node));
          std::partial_sort(src.begin(), src.begin() + static_cast<long>(kk),
                            src.end(), std::greater<>());
          for (std::size_t t = 0; t < kk; ++t) dst.push_back(a * src[t]);
        };
        take(ups, cand_up);
        take(downs, cand_down);
      }
      out.upper(i, j) += sum_of_largest(cand_up, budget.global);
      out.lower(i, j) -= sum_of_largest(cand_down, budget.global);
    }
  }
  return out;
}

IntervalElement interval_input_abstraction(const GcnModel& model,
                                           const Graph& graph,
                                           const PerturbationBudget& budget,
                                           IntervalVariant variant) {
  graph.validate();
  return interval_input_abstraction(model, graph, normalize_adjacency(graph),
                                    budget, variant);
}

IntervalElement linear_interval(const IntervalElement& elem,
                                const Matrix& weight, const Vector& bias) {
  if (elem.lower.cols() != weight.rows())
    throw DimensionError("interval width " + std::to_string(elem.lower.cols()) +
                         " does not match weight rows " +
                         std::to_string(weight.rows()));
  if (bias.size() != weight.cols())
    throw DimensionError("bias does not match weight columns");
  const Matrix pos = weight.cwiseMax(0.0);
  const Matrix neg = weight.cwiseMin(0.0);
  IntervalElement out;
  out.lower = elem.lower * pos + elem.upper * neg;
  out.upper = elem.upper * pos + elem.lower * neg;
  out.lower.rowwise() += bias.transpose();
  out.upper.rowwise() += bias.transpose();
  return out;
}

IntervalElement gc_interval(const IntervalElement& elem,
                            const Matrix& norm_adj) {
  if (norm_adj.cols() != elem.lower.rows())
    throw DimensionError("adjacency does not match interval rows");
  if ((norm_adj.array() < 0.0).any())
    throw DataError("normalized adjacency has a negative entry");
  return {norm_adj * elem.lower, norm_adj * elem.upper};
}

IntervalElement relu_interval(const IntervalElement& elem) {
  return {elem.lower.cwiseMax(0.0), elem.upper.cwiseMax(0.0)};
}

std::vector<IntervalElement> interval_layer_bounds(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    const PerturbationBudget& budget, IntervalVariant variant) {
  std::vector<IntervalElement> bounds;
  bounds.reserve(model.layers.size());
  bounds.push_back(
      interval_input_abstraction(model, graph, norm_adj, budget, variant));
  for (int l = 1; l < model.num_layers(); ++l) {
    const auto& layer = model.layers[static_cast<std::size_t>(l)];
    bounds.push_back(linear_interval(
        gc_interval(relu_interval(bounds.back()), norm_adj), layer.weight,
        layer.bias));
  }
  return bounds;
}

Vector interval_margins(const IntervalElement& output,
                        const std::vector<int>& labels) {
  const Eigen::Index n = output.lower.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw DimensionError("one label per node is required");
  Vector margins(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index other = 0; other < output.lower.cols(); ++other) {
      if (other == c) continue;
      best = std::min(best, output.lower(i, c) - output.upper(i, other));
    }
    margins(i) = best;
  }
  return margins;
}

Vector interval_certify(const GcnModel& model, const Graph& graph,
                        const PerturbationBudget& budget,
                        IntervalVariant variant) {
  graph.validate();
  const Matrix norm_adj = normalize_adjacency(graph);
  const auto labels = predict(model, norm_adj, graph.features).labels;
  const auto bounds =
      interval_layer_bounds(model, graph, norm_adj, budget, variant);
  return interval_margins(bounds.back(), labels);
}

}  // namespace gcncert
