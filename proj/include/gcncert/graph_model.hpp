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

#ifndef GCNCERT_GRAPH_MODEL_HPP_
#define GCNCERT_GRAPH_MODEL_HPP_

#include <utility>
#include <vector>

#include "gcncert/common.hpp"

namespace gcncert {

// Undirected attributed graph with binary node features. Entries of both
// matrices are stored as doubles holding exactly 0 or 1.
struct Graph {
  Matrix adjacency;  // n x n, symmetric
  Matrix features;   // n x m0

  int num_nodes() const { return static_cast<int>(adjacency.rows()); }
  int num_features() const { return static_cast<int>(features.cols()); }

  // Throws DataError / DimensionError when an invariant does not hold.
  void validate() const;

  // Builds a graph from an edge list. Edges are symmetrized; duplicates and
  // both orientations of the same edge collapse to one entry.
  static Graph from_edges(int num_nodes,
                          const std::vector<std::pair<int, int>>& edges,
                          Matrix features);
};

struct GcnLayer {
  Matrix weight;  // m_l x m_{l+1}
  Vector bias;    // m_{l+1}
};

// Stack of GCN layers. Layer l computes ReLU(A_hat * H * W_l + b_l); the last
// layer skips the ReLU so that output scores keep their sign.
struct GcnModel {
  std::vector<GcnLayer> layers;

  int num_layers() const { return static_cast<int>(layers.size()); }
  int input_width() const;
  int num_classes() const;

  // Checks the layer dimension chain.
  void validate() const;
  // Additionally checks that the model accepts `num_features` inputs.
  void validate_for(int num_features) const;
};

struct Prediction {
  Matrix scores;            // n x |C|
  std::vector<int> labels;  // row-wise argmax, lowest index on ties
};

// D^{-1/2} (A + I) D^{-1/2}.
Matrix normalize_adjacency(const Graph& graph);

// Score matrix H_z of the model on the given features.
Matrix forward(const GcnModel& model, const Matrix& norm_adj,
               const Matrix& features);

// Index of the maximum entry of `row`; the lowest index wins ties.
int argmax_row(
    const Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>>& row);

Prediction predict(const GcnModel& model, const Graph& graph);
Prediction predict(const GcnModel& model, const Matrix& norm_adj,
                   const Matrix& features);

}  // namespace gcncert

#endif  // GCNCERT_GRAPH_MODEL_HPP_
