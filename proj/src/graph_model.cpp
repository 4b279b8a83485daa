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

#include "gcncert/graph_model.hpp"

#include <cmath>
#include <string>

namespace gcncert {
namespace {

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

void Graph::validate() const {
  const auto n = adjacency.rows();
  if (n <= 0) throw DataError("graph must have at least one node");
  if (adjacency.cols() != n)
    throw DimensionError("adjacency must be square");
  if (features.rows() != n)
    throw DimensionError("features must have one row per node (expected " +
                         std::to_string(n) + ", got " +
                         std::to_string(features.rows()) + ")");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!is_binary(adjacency(i, j)))
        throw DataError("adjacency[" + std::to_string(i) + "][" +
                        std::to_string(j) + "] is not binary");
      if (adjacency(i, j) != adjacency(j, i))
        throw DataError("adjacency is not symmetric at (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
    }
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      if (!is_binary(features(i, j)))
        throw DataError("features[" + std::to_string(i) + "][" +
                        std::to_string(j) + "] is not binary");
    }
  }
}

Graph Graph::from_edges(int num_nodes,
                        const std::vector<std::pair<int, int>>& edges,
                        Matrix features) {
  if (num_nodes <= 0) throw DataError("graph must have at least one node");
  Graph g;
  g.adjacency = Matrix::Zero(num_nodes, num_nodes);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
      throw DataError("edges[" + std::to_string(e) + "] has an endpoint out of "
                      "range [0, " + std::to_string(num_nodes) + ")");
    g.adjacency(a, b) = 1.0;
    g.adjacency(b, a) = 1.0;
  }
  g.features = std::move(features);
  g.validate();
  return g;
}

int GcnModel::input_width() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weight.rows());
}

int GcnModel::num_classes() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weight.cols());
}

void GcnModel::validate() const {
  if (layers.empty()) throw DimensionError("model has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.weight.rows() == 0 || layer.weight.cols() == 0)
      throw DimensionError("layer " + std::to_string(l) + " has an empty weight");
    if (layer.bias.size() != layer.weight.cols())
      throw DimensionError("layer " + std::to_string(l) + ": bias has " +
                           std::to_string(layer.bias.size()) +
                           " entries, weight has " +
                           std::to_string(layer.weight.cols()) + " columns");
    if (l > 0 && layers[l - 1].weight.cols() != layer.weight.rows())
      throw DimensionError("layer " + std::to_string(l) + " expects " +
                           std::to_string(layer.weight.rows()) +
                           " inputs but layer " + std::to_string(l - 1) +
                           " produces " +
                           std::to_string(layers[l - 1].weight.cols()));
  }
}

void GcnModel::validate_for(int num_features) const {
  validate();
  if (input_width() != num_features)
    throw DimensionError("model expects " + std::to_string(input_width()) +
                         " input features, graph has " +
                         std::to_string(num_features));
}

Matrix normalize_adjacency(const Graph& graph) {
  const auto n = graph.adjacency.rows();
  const Matrix with_loops = graph.adjacency + Matrix::Identity(n, n);
  const Vector degree = with_loops.colwise().sum().transpose();
  Matrix out(n, n);
  // a_ij / sqrt(d_i d_j) keeps regular graphs exact (e.g. 1/sqrt(4) = 0.5).
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = with_loops(i, j) / std::sqrt(degree(i) * degree(j));
  return out;
}

Matrix forward(const GcnModel& model, const Matrix& norm_adj,
               const Matrix& features) {
  model.validate_for(static_cast<int>(features.cols()));
  if (norm_adj.rows() != features.rows() || norm_adj.cols() != features.rows())
    throw DimensionError("normalized adjacency does not match feature rows");
  Matrix h = features;
  for (int l = 0; l < model.num_layers(); ++l) {
    const auto& layer = model.layers[l];
    Matrix next = (norm_adj * h) * layer.weight;
    next.rowwise() += layer.bias.transpose();
    if (l + 1 < model.num_layers()) next = next.cwiseMax(0.0);
    h = std::move(next);
  }
  return h;
}

int argmax_row(
    const Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>>& row) {
  int best = 0;
  for (Eigen::Index c = 1; c < row.size(); ++c)
    if (row(c) > row(best)) best = static_cast<int>(c);
  return best;
}

Prediction predict(const GcnModel& model, const Matrix& norm_adj,
                   const Matrix& features) {
  Prediction p;
  p.scores = forward(model, norm_adj, features);
  p.labels.resize(static_cast<std::size_t>(p.scores.rows()));
  for (Eigen::Index i = 0; i < p.scores.rows(); ++i)
    p.labels[static_cast<std::size_t>(i)] = argmax_row(p.scores.row(i));
  return p;
}

Prediction predict(const GcnModel& model, const Graph& graph) {
  graph.validate();
  return predict(model, normalize_adjacency(graph), graph.features);
}

}  // namespace gcncert
