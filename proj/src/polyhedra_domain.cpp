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

#include "gcncert/polyhedra_domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace gcncert {

Vector PolyNodeElement::lower_at(const Matrix& features) const {
  Vector x(num_vars());
  for (int v = 0; v < num_vars(); ++v)
    x(v) = features(vars[static_cast<std::size_t>(v)].node,
                    vars[static_cast<std::size_t>(v)].feature);
  return lower_coef * x + lower_const;
}

Vector PolyNodeElement::upper_at(const Matrix& features) const {
  Vector x(num_vars());
  for (int v = 0; v < num_vars(); ++v)
    x(v) = features(vars[static_cast<std::size_t>(v)].node,
                    vars[static_cast<std::size_t>(v)].feature);
  return upper_coef * x + upper_const;
}

bool PolyNodeElement::is_exact(double tol) const {
  return (lower_coef - upper_coef).cwiseAbs().maxCoeff() <= tol &&
         (lower_const - upper_const).cwiseAbs().maxCoeff() <= tol;
}

PolyElement poly_input_abstraction(const Graph& graph) {
  const int n = graph.num_nodes();
  const int m0 = graph.num_features();
  PolyElement elems(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& e = elems[static_cast<std::size_t>(i)];
    e.vars.reserve(static_cast<std::size_t>(m0));
    for (int j = 0; j < m0; ++j) e.vars.push_back({i, j});
    e.lower_coef = Matrix::Identity(m0, m0);
    e.upper_coef = Matrix::Identity(m0, m0);
    e.lower_const = Vector::Zero(m0);
    e.upper_const = Vector::Zero(m0);
  }
  return elems;
}

PolyNodeElement linear_poly(const PolyNodeElement& elem, const Matrix& weight,
                            const Vector& bias) {
  if (weight.rows() != elem.rows())
    throw DimensionError("element has " + std::to_string(elem.rows()) +
                         " rows, weight expects " +
                         std::to_string(weight.rows()));
  if (bias.size() != weight.cols())
    throw DimensionError("bias does not match weight columns");
  const Matrix pos = weight.transpose().cwiseMax(0.0);
  const Matrix neg = weight.transpose().cwiseMin(0.0);
  PolyNodeElement out;
  out.vars = elem.vars;
  out.lower_coef = pos * elem.lower_coef + neg * elem.upper_coef;
  out.upper_coef = pos * elem.upper_coef + neg * elem.lower_coef;
  out.lower_const = pos * elem.lower_const + neg * elem.upper_const + bias;
  out.upper_const = pos * elem.upper_const + neg * elem.lower_const + bias;
  return out;
}

PolyNodeElement gc_poly(std::span<const PolyNodeElement> elems,
                        const Vector& norm_adj_row, int node) {
  if (static_cast<std::size_t>(norm_adj_row.size()) != elems.size())
    throw DimensionError("adjacency row does not match the element count");
  if (node < 0 || static_cast<std::size_t>(node) >= elems.size())
    throw DataError("node " + std::to_string(node) + " is out of range");
  if ((norm_adj_row.array() < 0.0).any())
    throw DataError("normalized adjacency row " + std::to_string(node) +
                    " has a negative entry");

  std::map<FeatureIndex, int> column;
  Eigen::Index rows = -1;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    if (norm_adj_row(static_cast<Eigen::Index>(k)) <= 0.0) continue;
    if (rows >= 0 && elems[k].rows() != rows)
      throw DimensionError("neighbour elements differ in width");
    rows = elems[k].rows();
    for (const auto& v : elems[k].vars) column.emplace(v, 0);
  }
  if (rows < 0) throw DataError("node " + std::to_string(node) +
                                " has no neighbour with positive weight");

  PolyNodeElement out;
  out.vars.reserve(column.size());
  for (auto& [v, c] : column) {
    c = static_cast<int>(out.vars.size());
    out.vars.push_back(v);
  }
  const auto width = static_cast<Eigen::Index>(out.vars.size());
  out.lower_coef = Matrix::Zero(rows, width);
  out.upper_coef = Matrix::Zero(rows, width);
  out.lower_const = Vector::Zero(rows);
  out.upper_const = Vector::Zero(rows);
  for (std::size_t k = 0; k < elems.size(); ++k) {
    const double a = norm_adj_row(static_cast<Eigen::Index>(k));
    if (a <= 0.0) continue;
    const auto& e = elems[k];
    for (int v = 0; v < e.num_vars(); ++v) {
      const int c = column.at(e.vars[static_cast<std::size_t>(v)]);
      out.lower_coef.col(c) += a * e.lower_coef.col(v);
      out.upper_coef.col(c) += a * e.upper_coef.col(v);
    }
    out.lower_const += a * e.lower_const;
    out.upper_const += a * e.upper_const;
  }
  return out;
}

ReluRelaxation relu_relaxation(double lo, double up, double zero_lower_slope) {
  ReluRelaxation r;
  if (lo >= 0.0) return r;
  if (up <= 0.0) {
    r.kind = ReluRelaxation::Case::kInactive;
    r.lower_slope = 0.0;
    r.upper_slope = 0.0;
    return r;
  }
  r.upper_slope = up / (up - lo);
  r.upper_shift = -up * lo / (up - lo);
  if (std::abs(up) >= std::abs(lo)) {
    r.kind = ReluRelaxation::Case::kMixedKeepLower;
    r.lower_slope = 1.0;
  } else {
    r.kind = ReluRelaxation::Case::kMixedZeroLower;
    r.lower_slope = zero_lower_slope;
  }
  return r;
}

double relu_relaxation_area(double lo, double up, double lambda) {
  return 0.5 * (-lambda * lo + up - lambda * up) * (up - lo);
}

PolyNodeElement relu_poly(const PolyNodeElement& elem,
                          const Vector& interval_lower,
                          const Vector& interval_upper,
                          double zero_lower_slope) {
  if (interval_lower.size() != elem.rows() ||
      interval_upper.size() != elem.rows())
    throw DimensionError("interval bounds do not match the element width");
  PolyNodeElement out = elem;
  for (int j = 0; j < elem.rows(); ++j) {
    const auto r =
        relu_relaxation(interval_lower(j), interval_upper(j), zero_lower_slope);
    out.lower_coef.row(j) *= r.lower_slope;
    out.lower_const(j) *= r.lower_slope;
    out.upper_coef.row(j) *= r.upper_slope;
    out.upper_const(j) = r.upper_slope * out.upper_const(j) + r.upper_shift;
  }
  return out;
}

std::vector<PolyElement> forward_poly_trace(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    const std::vector<IntervalElement>& pre_activation,
    double zero_lower_slope) {
  model.validate_for(graph.num_features());
  if (static_cast<int>(pre_activation.size()) != model.num_layers())
    throw DimensionError("one interval element per layer is required");
  const int n = graph.num_nodes();
  std::vector<PolyElement> trace;
  PolyElement current = poly_input_abstraction(graph);
  for (int l = 0; l < model.num_layers(); ++l) {
    const auto& layer = model.layers[static_cast<std::size_t>(l)];
    const bool last = l + 1 == model.num_layers();
    PolyElement next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Vector row = norm_adj.row(i).transpose();
      auto e = linear_poly(gc_poly(current, row, i), layer.weight, layer.bias);
      if (!last) {
        const auto& iv = pre_activation[static_cast<std::size_t>(l)];
        e = relu_poly(e, iv.lower.row(i).transpose(),
                      iv.upper.row(i).transpose(), zero_lower_slope);
      }
      next[static_cast<std::size_t>(i)] = std::move(e);
    }
    current = next;
    trace.push_back(std::move(next));
  }
  return trace;
}

PolyElement forward_poly(const GcnModel& model, const Graph& graph,
                         const Matrix& norm_adj,
                         const std::vector<IntervalElement>& pre_activation,
                         double zero_lower_slope) {
  return forward_poly_trace(model, graph, norm_adj, pre_activation,
                            zero_lower_slope)
      .back();
}

namespace {

// Output bounds of the target node written as linear combinations of the
// symbolic lower/upper forms of a latent layer restricted to `nodes`. Column
// p * width + f refers to feature f of nodes[p]. `ll` weighs lower forms in
// the output lower bound, `lu` upper forms in the output lower bound, and so
// on.
struct BackwardState {
  std::vector<int> nodes;
  Eigen::Index width = 0;
  Matrix ll, lu, ul, uu;
  Vector lower_const, upper_const;
};

void backward_relu(BackwardState& s, const IntervalElement& bounds,
                   double zero_lower_slope) {
  for (std::size_t p = 0; p < s.nodes.size(); ++p) {
    const int k = s.nodes[p];
    for (Eigen::Index f = 0; f < s.width; ++f) {
      const auto r = relu_relaxation(bounds.lower(k, f), bounds.upper(k, f),
                                     zero_lower_slope);
      const Eigen::Index c = static_cast<Eigen::Index>(p) * s.width + f;
      s.lower_const += s.lu.col(c) * r.upper_shift;
      s.upper_const += s.uu.col(c) * r.upper_shift;
      s.ll.col(c) *= r.lower_slope;
      s.ul.col(c) *= r.lower_slope;
      s.lu.col(c) *= r.upper_slope;
      s.uu.col(c) *= r.upper_slope;
    }
  }
}

void backward_linear(BackwardState& s, const GcnLayer& layer) {
  const Eigen::Index in = layer.weight.rows();
  const Eigen::Index out = layer.weight.cols();
  const Matrix pos_t = layer.weight.cwiseMax(0.0).transpose();  // out x in
  const Matrix neg_t = layer.weight.cwiseMin(0.0).transpose();
  const Eigen::Index rows = s.ll.rows();
  const auto cols = static_cast<Eigen::Index>(s.nodes.size()) * in;
  Matrix ll(rows, cols), lu(rows, cols), ul(rows, cols), uu(rows, cols);
  for (std::size_t p = 0; p < s.nodes.size(); ++p) {
    const Eigen::Index src = static_cast<Eigen::Index>(p) * out;
    const Eigen::Index dst = static_cast<Eigen::Index>(p) * in;
    const auto a_ll = s.ll.middleCols(src, out);
    const auto a_lu = s.lu.middleCols(src, out);
    const auto a_ul = s.ul.middleCols(src, out);
    const auto a_uu = s.uu.middleCols(src, out);
    ll.middleCols(dst, in) = a_ll * pos_t + a_lu * neg_t;
    lu.middleCols(dst, in) = a_ll * neg_t + a_lu * pos_t;
    ul.middleCols(dst, in) = a_ul * pos_t + a_uu * neg_t;
    uu.middleCols(dst, in) = a_ul * neg_t + a_uu * pos_t;
    s.lower_const += (a_ll + a_lu) * layer.bias;
    s.upper_const += (a_ul + a_uu) * layer.bias;
  }
  s.ll = std::move(ll);
  s.lu = std::move(lu);
  s.ul = std::move(ul);
  s.uu = std::move(uu);
  s.width = in;
}

void backward_gc(BackwardState& s, const Matrix& norm_adj) {
  if ((norm_adj.array() < 0.0).any())
    throw DataError("normalized adjacency has a negative entry");
  std::vector<int> sources;
  for (const int k : s.nodes)
    for (Eigen::Index m = 0; m < norm_adj.cols(); ++m)
      if (norm_adj(k, m) > 0.0) sources.push_back(static_cast<int>(m));
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  std::vector<Eigen::Index> pos_of(static_cast<std::size_t>(norm_adj.cols()), -1);
  for (std::size_t q = 0; q < sources.size(); ++q)
    pos_of[static_cast<std::size_t>(sources[q])] = static_cast<Eigen::Index>(q);

  const Eigen::Index rows = s.ll.rows();
  const auto cols = static_cast<Eigen::Index>(sources.size()) * s.width;
  Matrix ll = Matrix::Zero(rows, cols), lu = Matrix::Zero(rows, cols),
         ul = Matrix::Zero(rows, cols), uu = Matrix::Zero(rows, cols);
  for (std::size_t p = 0; p < s.nodes.size(); ++p) {
    const int k = s.nodes[p];
    const Eigen::Index src = static_cast<Eigen::Index>(p) * s.width;
    for (Eigen::Index m = 0; m < norm_adj.cols(); ++m) {
      const double a = norm_adj(k, m);
      if (a <= 0.0) continue;
      const Eigen::Index dst = pos_of[static_cast<std::size_t>(m)] * s.width;
      ll.middleCols(dst, s.width) += a * s.ll.middleCols(src, s.width);
      lu.middleCols(dst, s.width) += a * s.lu.middleCols(src, s.width);
      ul.middleCols(dst, s.width) += a * s.ul.middleCols(src, s.width);
      uu.middleCols(dst, s.width) += a * s.uu.middleCols(src, s.width);
    }
  }
  s.nodes = std::move(sources);
  s.ll = std::move(ll);
  s.lu = std::move(lu);
  s.ul = std::move(ul);
  s.uu = std::move(uu);
}

}  // namespace

PolyNodeElement back_substitute(
    const GcnModel& model, const Graph& graph, const Matrix& norm_adj,
    int node, const std::vector<IntervalElement>& pre_activation,
    double zero_lower_slope) {
  model.validate_for(graph.num_features());
  if (node < 0 || node >= graph.num_nodes())
    throw DataError("node " + std::to_string(node) + " is out of range");
  if (static_cast<int>(pre_activation.size()) != model.num_layers())
    throw DimensionError("one interval element per layer is required");

  const Eigen::Index classes = model.num_classes();
  BackwardState s;
  s.nodes = {node};
  s.width = classes;
  s.ll = Matrix::Identity(classes, classes);
  s.uu = Matrix::Identity(classes, classes);
  s.lu = Matrix::Zero(classes, classes);
  s.ul = Matrix::Zero(classes, classes);
  s.lower_const = Vector::Zero(classes);
  s.upper_const = Vector::Zero(classes);

  for (int l = model.num_layers() - 1; l >= 0; --l) {
    if (l + 1 < model.num_layers())
      backward_relu(s, pre_activation[static_cast<std::size_t>(l)],
                    zero_lower_slope);
    backward_linear(s, model.layers[static_cast<std::size_t>(l)]);
    backward_gc(s, norm_adj);
  }

  // At the input both symbolic forms of x are x itself.
  PolyNodeElement out;
  out.vars.reserve(s.nodes.size() * static_cast<std::size_t>(s.width));
  for (const int k : s.nodes)
    for (Eigen::Index f = 0; f < s.width; ++f)
      out.vars.push_back({k, static_cast<int>(f)});
  out.lower_coef = s.ll + s.lu;
  out.upper_coef = s.ul + s.uu;
  out.lower_const = s.lower_const;
  out.upper_const = s.upper_const;
  return out;
}

}  // namespace gcncert
