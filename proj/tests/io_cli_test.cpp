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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcncert/cli.hpp"
#include "gcncert/io.hpp"
#include "test_support.hpp"

namespace gcncert {
namespace {

namespace fs = std::filesystem;

const std::string kGraph = std::string(GCNCERT_FIXTURE_DIR) +
                           "/worked_example_graph.json";
const std::string kModel = std::string(GCNCERT_FIXTURE_DIR) +
                           "/worked_example_model.json";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gcncert_io_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

TEST(LoadGraph, WorkedExampleFixture) {
  const Graph g = load_graph(kGraph);
  EXPECT_EQ(g.num_nodes(), 2);
  EXPECT_EQ(g.num_features(), 4);
  EXPECT_EQ(g.adjacency(0, 1), 1.0);
  EXPECT_EQ(g.adjacency(0, 0), 0.0);
}

TEST(LoadModel, WorkedExampleReproducesScores) {
  const GcnModel m = load_model(kModel);
  EXPECT_EQ(m.num_layers(), 2);
  const auto p = predict(m, load_graph(kGraph));
  EXPECT_NEAR(p.scores(0, 0), 1.5, 1e-12);
  EXPECT_NEAR(p.scores(0, 1), 2.5, 1e-12);
}

TEST(ParseGraph, EmptyEdgesGiveIsolatedNodes) {
  const Graph g = parse_graph(
      R"({"num_nodes": 3, "num_features": 1, "edges": [],
          "features": [[0], [1], [0]]})");
  EXPECT_TRUE(g.adjacency.isZero());
}

TEST(ParseGraph, RejectsNonBinaryFeatureWithPath) {
  try {
    parse_graph(R"({"num_nodes": 1, "num_features": 2, "edges": [],
                    "features": [[0, 2]]})");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("graph.features[0][1]"),
              std::string::npos)
        << e.what();
  }
}

TEST(ParseGraph, RejectsMalformedInput) {
  EXPECT_THROW(parse_graph("{"), DataError);
  EXPECT_THROW(parse_graph(R"({"num_nodes": 1, "num_features": 1,
                               "edges": [[0, 1]], "features": [[0]]})"),
               DataError);
  EXPECT_THROW(parse_graph(R"({"num_nodes": 1, "num_features": 1, "extra": 1,
                               "edges": [], "features": [[0]]})"),
               DataError);
}

TEST(ParseModel, SingleLayerIsValid) {
  const GcnModel m =
      parse_model(R"({"layers": [{"weight": [[1, 2]], "bias": [0, 1]}]})");
  EXPECT_EQ(m.num_layers(), 1);
  EXPECT_EQ(m.num_classes(), 2);
}

TEST(ParseModel, RejectsMismatchedWidths) {
  EXPECT_THROW(parse_model(R"({"layers": [
      {"weight": [[1, 2]], "bias": [0, 1]},
      {"weight": [[1], [2], [3]], "bias": [0]}]})"),
               DataError);
  EXPECT_THROW(parse_model(R"({"layers": [{"weight": [[1, 2]], "bias": [0]}]})"),
               std::invalid_argument);
}

TEST(RoundTrip, GraphAndModel) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testing::random_instance(seed);
    const Graph g = parse_graph(dump_graph(inst.graph));
    EXPECT_EQ(g.adjacency, inst.graph.adjacency);
    EXPECT_EQ(g.features, inst.graph.features);
    const GcnModel m = parse_model(dump_model(inst.model));
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      EXPECT_EQ(m.layers[l].weight, inst.model.layers[l].weight);
      EXPECT_EQ(m.layers[l].bias, inst.model.layers[l].bias);
    }
  }
  const fs::path p = scratch("model.json");
  save_model(load_model(kModel), p.string());
  EXPECT_EQ(dump_model(load_model(p.string())), dump_model(load_model(kModel)));
}

TEST(LoadLabels, ParsesAndValidates) {
  const fs::path p = scratch("labels.csv");
  write_text(p, "node,label\n0,1\n2,0\n");
  const auto labels = load_labels(p.string(), 3);
  EXPECT_EQ(labels[0], 1);
  EXPECT_FALSE(labels[1].has_value());
  EXPECT_EQ(labels[2], 0);
  write_text(p, "5,1\n");
  EXPECT_THROW(load_labels(p.string(), 3), DataError);
}

TEST(Format, RealsAndFlips) {
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(-0.5), "-0.5");
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_flips({{0, 2}, {1, 3}}), "0:2;1:3");
  EXPECT_EQ(parse_flips("0:2;1:3"), (FlipSet{{0, 2}, {1, 3}}));
  EXPECT_TRUE(parse_flips("").empty());
  EXPECT_THROW(parse_flips("0-2"), DataError);
}

TEST(Cli, CertifyWorkedExamplePoly) {
  const auto r = run({"certify", "--graph", kGraph, "--model", kModel,
                      "--local", "1", "--global", "1", "--method",
                      "poly-topk"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "node,margin,certified,counterexample_flips");
  EXPECT_EQ(l[1], "0,0.5,true,");
}

TEST(Cli, CertifyWorkedExampleInterval) {
  const auto r = run({"certify", "--graph", kGraph, "--model", kModel,
                      "--local", "1", "--global", "1", "--method",
                      "interval-topk"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out)[1], "0,-0.5,false,");
}

TEST(Cli, SweepProducesOneRowPerBudget) {
  const auto r = run({"sweep", "--graph", kGraph, "--model", kModel,
                      "--local", "1", "--global-range", "1:5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "p_l,p_g,lower,upper,runtime_ms");
  for (std::size_t t = 1; t < l.size(); ++t) {
    std::istringstream row(l[t]);
    std::string pl, pg, lo, up;
    std::getline(row, pl, ',');
    std::getline(row, pg, ',');
    std::getline(row, lo, ',');
    std::getline(row, up, ',');
    EXPECT_EQ(pg, std::to_string(t));
    EXPECT_LE(std::stod(lo), std::stod(up));
  }
}

TEST(Cli, CollectiveAndOracle) {
  auto r = run({"collective", "--graph", kGraph, "--model", kModel, "--local",
                "1", "--cap", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out)[0], "node,max_robust_limit,never_certified");
  EXPECT_EQ(lines(r.out).size(), 3u);
  r = run({"oracle", "--graph", kGraph, "--model", kModel, "--local", "1",
           "--global", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out)[1], "0,1,true");
}

TEST(Cli, CounterexampleSchema) {
  const auto r = run({"counterexample", "--graph", kGraph, "--model", kModel,
                      "--local", "1", "--global", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out),
            std::vector<std::string>{"node,original_label,flipped_label,flips"});
}

TEST(Cli, OutputFile) {
  const fs::path p = scratch("certify.csv");
  const auto r = run({"certify", "--graph", kGraph, "--model", kModel,
                      "--output", p.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(p);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "node,margin,certified,counterexample_flips");
}

TEST(Cli, TrainWritesModel) {
  const fs::path out = scratch("trained.json");
  const fs::path labels = scratch("train_labels.csv");
  write_text(labels, "0,1\n");
  const auto r = run({"train", "--graph", kGraph, "--model", kModel,
                      "--labels", labels.string(), "--steps", "2", "--lr",
                      "0.01", "--model-out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(r.out).size(), 3u);
  EXPECT_EQ(load_model(out.string()).num_layers(), 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"certify", "--graph", kGraph, "--model", kModel, "--bogus"})
                .code,
            kExitUsage);
  EXPECT_EQ(run({"certify", "--graph", kGraph, "--model", kModel, "--method",
                 "nope"})
                .code,
            kExitUsage);
  EXPECT_EQ(run({"sweep", "--graph", kGraph, "--model", kModel,
                 "--global-range", "5:1"})
                .code,
            kExitUsage);
  EXPECT_EQ(
      run({"certify", "--graph", "/nonexistent.json", "--model", kModel}).code,
      kExitData);
  const fs::path bad = scratch("bad_graph.json");
  write_text(bad, R"({"num_nodes": 1, "num_features": 4, "edges": [],
                      "features": [[0, 2, 0, 0]]})");
  const auto r = run({"certify", "--graph", bad.string(), "--model", kModel});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("features[0][1]"), std::string::npos) << r.err;
  EXPECT_EQ(run({"oracle", "--graph", kGraph, "--model", kModel, "--local",
                 "1", "--global", "1", "--cap", "1"})
                .code,
            kExitOracleInfeasible);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const auto inst = testing::random_instance(17);
  const fs::path g = scratch("rand_graph.json");
  const fs::path m = scratch("rand_model.json");
  save_graph(inst.graph, g.string());
  save_model(inst.model, m.string());
  for (const char* cmd : {"certify", "counterexample"}) {
    const auto a = run({cmd, "--graph", g.string(), "--model", m.string(),
                        "--local", "2", "--global", "3", "--threads", "1"});
    const auto b = run({cmd, "--graph", g.string(), "--model", m.string(),
                        "--local", "2", "--global", "3", "--threads", "4"});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
  }
}

}  // namespace
}  // namespace gcncert
