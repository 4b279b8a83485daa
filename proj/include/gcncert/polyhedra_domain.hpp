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

#ifndef GCNCERT_POLYHEDRA_DOMAIN_HPP_
#define GCNCERT_POLYHEDRA_DOMAIN_HPP_

#include <span>
#include <vector>

#include "gcncert/common.hpp"
#include "gcncert/graph_model.hpp"
#include "gcncert/interval_domain.hpp"
#include "gcncert/perturbation.hpp"

namespace gcncert {

// Symbolic bounds on the latent features of one node:
//
//   lower_coef * x(vars) + lower_const  <=  h  <=  upper_coef * x(vars) + upper_const
//
// where x(vars) reads the listed input-feature entries. `vars` is sorted and
// duplicate-free.
struct PolyNodeElement {
  std::vector<FeatureIndex> vars;
  Matrix lower_coef;  // rows x |vars|
  Vector lower_const;
  Matrix upper_coef;
  Vector upper_const;

  int rows() const { return static_cast<int>(lower_const.size()); }
  int num_vars() const { return static_cast<int>(vars.size()); }

  Vector lower_at(const Matrix& features) const;
  Vector upper_at(const Matrix& features) const;
  // Both sides carry the same linear form (up to tol).
  bool is_exact(double tol = 0.0) const;
};

using PolyElement = std::vector<PolyNodeElement>;

// Each input feature bounds itself: identity coefficients, zero constants.
PolyElement poly_input_abstraction(const Graph& graph);

PolyNodeElement linear_poly(const PolyNodeElement& elem, const Matrix& weight,
                            const Vector& bias);

// Graph convolution for `node`: concatenates the A_hat[node, k]-scaled
// elements of all k with a positive weight, summing columns of shared
// variables. `elems` is indexed by node. Throws DataError on a negative
// weight.
PolyNodeElement gc_poly(std::span<const PolyNodeElement> elems,
                        const Vector& norm_adj_row, int node);

// Linear relaxation of ReLU on [lo, up]:
//   lower_slope * h  <=  relu(h)  <=  upper_slope * h + upper_shift
// lower_slope applies to the node's lower form; it is 1 or 0 (or the
// configured slope for the |up| < |lo| case).
struct ReluRelaxation {
  enum class Case { kActive, kInactive, kMixedKeepLower, kMixedZeroLower };
  Case kind = Case::kActive;
  double lower_slope = 1.0;
  double upper_slope = 1.0;
  double upper_shift = 0.0;
};

// `zero_lower_slope` is the lower slope used when |up| < |lo|; 0 gives the
// minimum-area relaxation, any value in [0, 1] stays sound.
ReluRelaxation relu_relaxation(double lo, double up,
                               double zero_lower_slope = 0.0);

// Area between the lower line lambda*h and the upper chord over [lo, up]
// for lo < 0 < up.
double relu_relaxation_area(double lo, double up, double lambda);

PolyNodeElement relu_poly(const PolyNodeElement& elem,
                          const Vector& interval_lower,
                          const Vector& interval_upper,
                          double zero_lower_slope = 0.0);

// Post-layer elements of every node for every layer, computed layer by
// layer. trace[l] holds the element after layer l (after its ReLU except for
// the last layer). `pre_activation` comes from interval_layer_bounds.
std::vector<PolyElement> forward_poly_trace(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    const std::vector<IntervalElement>& pre_activation,
    double zero_lower_slope = 0.0);

// Output-layer element of every node by forward propagation.
PolyElement forward_poly(const GcnModel& model, const Graph& graph,
                         const Matrix& norm_adj,
                         const std::vector<IntervalElement>& pre_activation,
                         double zero_lower_slope = 0.0);

// Output-layer element of `node`, obtained by composing the abstract
// operators from the output back to the input features. Only the z-hop
// neighbourhood of `node` is touched. The result equals the node's entry of
// forward_poly up to rounding.
PolyNodeElement back_substitute(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    int node, const std::vector<IntervalElement>& pre_activation,
    double zero_lower_slope = 0.0);

}  // namespace gcncert

#endif  // GCNCERT_POLYHEDRA_DOMAIN_HPP_
