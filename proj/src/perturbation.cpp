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

#include "gcncert/perturbation.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

namespace gcncert {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(r) * static_cast<unsigned>(n - k + i) /
        static_cast<unsigned>(i);
    if (wide > kSaturated) return kSaturated;
    r = static_cast<std::uint64_t>(wide);
  }
  return r;
}

std::vector<FeatureIndex> flip_candidates(const Matrix& features,
                                          const PerturbationBudget& budget) {
  std::vector<FeatureIndex> out;
  for (Eigen::Index k = 0; k < features.rows(); ++k)
    for (Eigen::Index j = 0; j < features.cols(); ++j)
      if (budget.allows_flip(features(k, j)))
        out.push_back({static_cast<int>(k), static_cast<int>(j)});
  return out;
}

// Depth-first generation of size-`target` subsets of `cands` in
// lexicographic order, pruned by the per-node limit.
class SubsetWalker {
 public:
  SubsetWalker(const std::vector<FeatureIndex>& cands, int num_nodes,
               int local, const std::function<bool(const FlipSet&)>& visit)
      : cands_(cands), per_node_(static_cast<std::size_t>(num_nodes), 0),
        local_(local), visit_(visit) {}

  // Returns false once the visitor asked to stop.
  bool run(int target) {
    target_ = target;
    current_.clear();
    return descend(0);
  }

 private:
  bool descend(std::size_t start) {
    if (static_cast<int>(current_.size()) == target_) return visit_(current_);
    const std::size_t remaining =
        static_cast<std::size_t>(target_) - current_.size();
    for (std::size_t c = start; c + remaining <= cands_.size(); ++c) {
      const auto node = static_cast<std::size_t>(cands_[c].node);
      if (per_node_[node] >= local_) continue;
      ++per_node_[node];
      current_.push_back(cands_[c]);
      const bool keep_going = descend(c + 1);
      current_.pop_back();
      --per_node_[node];
      if (!keep_going) return false;
    }
    return true;
  }

  const std::vector<FeatureIndex>& cands_;
  std::vector<int> per_node_;
  int local_;
  const std::function<bool(const FlipSet&)>& visit_;
  FlipSet current_;
  int target_ = 0;
};

}  // namespace

bool PerturbationBudget::allows_flip(double value) const {
  switch (mode) {
    case FlipMode::kAddOnly:
      return value == 0.0;
    case FlipMode::kDeleteOnly:
      return value == 1.0;
    case FlipMode::kBoth:
      break;
  }
  return true;
}

void PerturbationBudget::validate() const {
  if (local < 0 || global < 0)
    throw DataError("perturbation limits must be non-negative (local=" +
                    std::to_string(local) + ", global=" +
                    std::to_string(global) + ")");
}

Matrix sign_matrix(const Matrix& features) {
  return features.unaryExpr([](double x) { return x == 0.0 ? 1.0 : -1.0; });
}

Matrix apply_flips(const Matrix& features, const FlipSet& flips) {
  Matrix out = features;
  for (std::size_t f = 0; f < flips.size(); ++f) {
    const auto& idx = flips[f];
    if (idx.node < 0 || idx.node >= features.rows() || idx.feature < 0 ||
        idx.feature >= features.cols())
      throw DataError("flip (" + std::to_string(idx.node) + ", " +
                      std::to_string(idx.feature) + ") is out of range");
    if (f > 0 && !(flips[f - 1] < idx))
      throw DataError("flip set must be sorted and duplicate-free");
    out(idx.node, idx.feature) = 1.0 - out(idx.node, idx.feature);
  }
  return out;
}

bool within_budget(const Matrix& features, const FlipSet& flips,
                   const PerturbationBudget& budget) {
  if (static_cast<int>(flips.size()) > budget.global) return false;
  std::vector<int> per_node(static_cast<std::size_t>(features.rows()), 0);
  for (std::size_t f = 0; f < flips.size(); ++f) {
    const auto& idx = flips[f];
    if (idx.node < 0 || idx.node >= features.rows() || idx.feature < 0 ||
        idx.feature >= features.cols())
      return false;
    if (f > 0 && !(flips[f - 1] < idx)) return false;
    if (!budget.allows_flip(features(idx.node, idx.feature))) return false;
    if (++per_node[static_cast<std::size_t>(idx.node)] > budget.local)
      return false;
  }
  return true;
}

std::uint64_t oracle_cap_from_env() {
  if (const char* env = std::getenv("GCNCERT_ORACLE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return kDefaultOracleCap;
}

std::uint64_t count_perturbations(const Matrix& features,
                                  const PerturbationBudget& budget) {
  budget.validate();
  const int g = budget.global;
  // ways[t] = number of admissible flip sets of size t over processed nodes.
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(g) + 1, 0);
  ways[0] = 1;
  for (Eigen::Index k = 0; k < features.rows(); ++k) {
    int avail = 0;
    for (Eigen::Index j = 0; j < features.cols(); ++j)
      if (budget.allows_flip(features(k, j))) ++avail;
    const int per_node = std::min(budget.local, avail);
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (int t = 0; t <= g; ++t) {
      if (ways[static_cast<std::size_t>(t)] == 0) continue;
      for (int c = 0; c <= per_node && t + c <= g; ++c)
        next[static_cast<std::size_t>(t + c)] =
            sat_add(next[static_cast<std::size_t>(t + c)],
                    sat_mul(ways[static_cast<std::size_t>(t)],
                            binomial(avail, c)));
    }
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = sat_add(total, w);
  return total;
}

void enumerate_perturbations(const Matrix& features,
                             const PerturbationBudget& budget,
                             const std::function<bool(const FlipSet&)>& visit,
                             std::uint64_t cap) {
  const std::uint64_t total = count_perturbations(features, budget);
  if (total > cap)
    throw OracleInfeasible("exhaustive oracle would visit " +
                           (total == kSaturated ? std::string("more than 2^64")
                                                : std::to_string(total)) +
                           " flip sets, above the cap of " +
                           std::to_string(cap));
  const auto cands = flip_candidates(features, budget);
  SubsetWalker walker(cands, static_cast<int>(features.rows()), budget.local,
                      visit);
  const int largest =
      std::min<int>(budget.global, static_cast<int>(cands.size()));
  for (int size = 0; size <= largest; ++size)
    if (!walker.run(size)) return;
}

std::vector<bool> exact_robustness(const GcnModel& model, const Graph& graph,
                                   const PerturbationBudget& budget,
                                   std::uint64_t cap) {
  graph.validate();
  const Matrix norm_adj = normalize_adjacency(graph);
  const auto base = predict(model, norm_adj, graph.features).labels;
  std::vector<bool> robust(base.size(), true);
  std::size_t remaining = base.size();
  enumerate_perturbations(
      graph.features, budget,
      [&](const FlipSet& flips) {
        if (flips.empty()) return true;
        const auto labels =
            predict(model, norm_adj, apply_flips(graph.features, flips)).labels;
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (robust[i] && labels[i] != base[i]) {
            robust[i] = false;
            --remaining;
          }
        }
        return remaining > 0;
      },
      cap);
  return robust;
}

bool exact_node_robustness(const GcnModel& model, const Graph& graph,
                           const PerturbationBudget& budget, int node,
                           std::uint64_t cap) {
  graph.validate();
  if (node < 0 || node >= graph.num_nodes())
    throw DataError("node " + std::to_string(node) + " is out of range");
  const Matrix norm_adj = normalize_adjacency(graph);
  const int base = predict(model, norm_adj, graph.features).labels[node];
  bool robust = true;
  enumerate_perturbations(
      graph.features, budget,
      [&](const FlipSet& flips) {
        if (flips.empty()) return true;
        const Matrix scores =
            forward(model, norm_adj, apply_flips(graph.features, flips));
        if (argmax_row(scores.row(node)) != base) robust = false;
        return robust;
      },
      cap);
  return robust;
}

std::vector<int> exact_max_robust_budget(const GcnModel& model,
                                         const Graph& graph,
                                         const PerturbationBudget& budget,
                                         int max_global, std::uint64_t cap) {
  graph.validate();
  PerturbationBudget search = budget;
  search.global = max_global;
  const Matrix norm_adj = normalize_adjacency(graph);
  const auto base = predict(model, norm_adj, graph.features).labels;
  std::vector<int> limit(base.size(), max_global);
  std::vector<bool> broken(base.size(), false);
  std::size_t remaining = base.size();
  // Sets arrive by increasing size, so the first break of a node is minimal.
  enumerate_perturbations(
      graph.features, search,
      [&](const FlipSet& flips) {
        if (flips.empty()) return true;
        const auto labels =
            predict(model, norm_adj, apply_flips(graph.features, flips)).labels;
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (!broken[i] && labels[i] != base[i]) {
            broken[i] = true;
            limit[i] = static_cast<int>(flips.size()) - 1;
            --remaining;
          }
        }
        return remaining > 0;
      },
      cap);
  return limit;
}

}  // namespace gcncert
