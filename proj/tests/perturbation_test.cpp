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

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "test_support.hpp"

namespace gcncert {
namespace {

std::vector<FlipSet> collect(const Matrix& x, const PerturbationBudget& b) {
  std::vector<FlipSet> out;
  enumerate_perturbations(x, b, [&](const FlipSet& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

TEST(SignMatrix, Examples) {
  Matrix x(1, 2);
  x << 0, 1;
  Matrix expected(1, 2);
  expected << 1, -1;
  EXPECT_EQ(sign_matrix(x), expected);
  EXPECT_EQ(sign_matrix(Matrix::Zero(2, 3)), Matrix::Ones(2, 3));
  EXPECT_EQ(sign_matrix(Matrix::Ones(2, 3)), -Matrix::Ones(2, 3));
  // X + P flips every entry.
  const Matrix sum = x + sign_matrix(x);
  EXPECT_EQ(sum(0, 0), 1.0);
  EXPECT_EQ(sum(0, 1), 0.0);
}

TEST(ApplyFlips, Examples) {
  Matrix x(1, 2);
  x << 0, 1;
  Matrix one(1, 2);
  one << 1, 1;
  EXPECT_EQ(apply_flips(x, {{0, 0}}), one);
  EXPECT_EQ(apply_flips(x, {}), x);
  Matrix both(1, 2);
  both << 1, 0;
  EXPECT_EQ(apply_flips(x, {{0, 0}, {0, 1}}), both);
}

TEST(ApplyFlips, OutOfRangeRejected) {
  const Matrix x = Matrix::Zero(2, 2);
  EXPECT_THROW(apply_flips(x, {{2, 0}}), DataError);
  EXPECT_THROW(apply_flips(x, {{0, -1}}), DataError);
  EXPECT_THROW(apply_flips(x, {{0, 1}, {0, 1}}), DataError);
}

TEST(ApplyFlips, Involution) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_instance(seed);
    enumerate_perturbations(inst.graph.features, inst.budget,
                            [&](const FlipSet& f) {
                              const Matrix once =
                                  apply_flips(inst.graph.features, f);
                              EXPECT_EQ(apply_flips(once, f),
                                        inst.graph.features);
                              return true;
                            });
  }
}

TEST(Enumerate, OneNodeTwoFeatures) {
  const auto sets = collect(Matrix::Zero(1, 2), {1, 1});
  ASSERT_EQ(sets.size(), 3u);
  EXPECT_TRUE(sets[0].empty());
  EXPECT_EQ(sets[1], (FlipSet{{0, 0}}));
  EXPECT_EQ(sets[2], (FlipSet{{0, 1}}));
}

TEST(Enumerate, TwoNodesOneFeatureEach) {
  const auto sets = collect(Matrix::Zero(2, 1), {1, 2});
  ASSERT_EQ(sets.size(), 4u);
  EXPECT_EQ(sets[3], (FlipSet{{0, 0}, {1, 0}}));
}

TEST(Enumerate, ZeroGlobalBudgetYieldsEmptySetOnly) {
  const auto sets = collect(Matrix::Ones(3, 3), {3, 0});
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_TRUE(sets[0].empty());
}

TEST(Enumerate, OrderedByCardinalityThenLexicographic) {
  const auto sets = collect(Matrix::Zero(2, 3), {2, 3});
  for (std::size_t s = 1; s < sets.size(); ++s) {
    if (sets[s - 1].size() == sets[s].size())
      EXPECT_LT(sets[s - 1], sets[s]);
    else
      EXPECT_LT(sets[s - 1].size(), sets[s].size());
  }
}

TEST(Enumerate, NoDuplicatesAndBudgetRespected) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto inst = testing::random_instance(seed);
    inst.budget.mode = static_cast<FlipMode>(seed % 3);
    std::set<FlipSet> seen;
    const auto sets = collect(inst.graph.features, inst.budget);
    for (const auto& f : sets) {
      EXPECT_TRUE(seen.insert(f).second);
      EXPECT_TRUE(within_budget(inst.graph.features, f, inst.budget));
    }
    EXPECT_EQ(sets.size(),
              count_perturbations(inst.graph.features, inst.budget));
    // Brute force over all subsets reaches the same number of matrices.
    {
      std::size_t brute = 0;
      testing::for_each_perturbed(inst.graph.features, inst.budget,
                                  [&](const Matrix&) { ++brute; });
      EXPECT_EQ(brute, sets.size());
    }
  }
}

TEST(Enumerate, CapExceededIsAnError) {
  const Matrix x = Matrix::Zero(10, 10);
  EXPECT_THROW(enumerate_perturbations(
                   x, {3, 3}, [](const FlipSet&) { return true; }, 1000),
               OracleInfeasible);
}

TEST(Enumerate, CapFromEnvironment) {
  ::setenv("GCNCERT_ORACLE_CAP", "42", 1);
  EXPECT_EQ(oracle_cap_from_env(), 42u);
  ::unsetenv("GCNCERT_ORACLE_CAP");
  EXPECT_EQ(oracle_cap_from_env(), kDefaultOracleCap);
}

TEST(Enumerate, ModesRestrictDirections) {
  Matrix x(1, 3);
  x << 0, 1, 0;
  PerturbationBudget add{3, 3, FlipMode::kAddOnly};
  for (const auto& f : collect(x, add))
    for (const auto& idx : f) EXPECT_EQ(x(idx.node, idx.feature), 0.0);
  EXPECT_EQ(collect(x, add).size(), 4u);
  PerturbationBudget del{3, 3, FlipMode::kDeleteOnly};
  EXPECT_EQ(collect(x, del).size(), 2u);
}

TEST(ExactRobustness, ZeroBudgetAlwaysRobust) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testing::random_instance(seed);
    for (int i = 0; i < inst.graph.num_nodes(); ++i)
      EXPECT_TRUE(exact_node_robustness(inst.model, inst.graph, {2, 0}, i));
  }
}

TEST(ExactRobustness, MatchesIndependentBruteForce) {
  testing::InstanceShape shape;
  shape.max_nodes = 3;
  shape.max_features = 4;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = testing::random_instance(seed, shape);
    const auto expected =
        testing::brute_force_robust(inst.model, inst.graph, inst.budget);
    EXPECT_EQ(exact_robustness(inst.model, inst.graph, inst.budget), expected);
    for (int i = 0; i < inst.graph.num_nodes(); ++i)
      EXPECT_EQ(exact_node_robustness(inst.model, inst.graph, inst.budget, i),
                expected[static_cast<std::size_t>(i)]);
  }
}

TEST(ExactRobustness, MonotoneInBudgets) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = testing::random_instance(seed);
    for (int local = 0; local <= 2; ++local) {
      for (int global = 0; global < 3; ++global) {
        const auto base =
            exact_robustness(inst.model, inst.graph, {local, global});
        const auto more_global =
            exact_robustness(inst.model, inst.graph, {local, global + 1});
        const auto more_local =
            exact_robustness(inst.model, inst.graph, {local + 1, global});
        for (std::size_t i = 0; i < base.size(); ++i) {
          if (!base[i]) {
            EXPECT_FALSE(more_global[i]);
            EXPECT_FALSE(more_local[i]);
          }
        }
      }
    }
  }
}

TEST(ExactMaxRobustBudget, AgreesWithPerBudgetOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_instance(seed);
    const auto limits =
        exact_max_robust_budget(inst.model, inst.graph, {2, 0}, 4);
    for (int g = 0; g <= 4; ++g) {
      const auto robust = exact_robustness(inst.model, inst.graph, {2, g});
      for (std::size_t i = 0; i < robust.size(); ++i)
        EXPECT_EQ(robust[i], g <= limits[i]) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace gcncert
