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

#include "gcncert/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "gcncert/certification.hpp"
#include "gcncert/collective.hpp"
#include "gcncert/io.hpp"
#include "gcncert/metrics.hpp"
#include "gcncert/perturbation.hpp"
#include "gcncert/robust_training.hpp"

namespace gcncert {
namespace {

struct Flags {
  std::string graph;
  std::string model;
  int local = 1;
  int global = 1;
  std::string global_range;
  std::string method = "poly-topk";
  std::string mode = "both";
  std::string output;
  std::uint64_t seed = 0;
  int threads = 1;
  long long cap = -1;
  // train
  std::string labels;
  int steps = 100;
  double learning_rate = 0.05;
  std::string loss = "hinge";
  int batch = 0;
  double lambda = 0.0;
  bool pure_poly = false;
  std::string model_out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Flags& f, bool needs_global) {
  cmd->add_option("--graph", f.graph, "Graph file (JSON)")->required();
  cmd->add_option("--model", f.model, "Model file (JSON)")->required();
  cmd->add_option("--local", f.local, "Max flips per node")
      ->check(CLI::NonNegativeNumber);
  if (needs_global)
    cmd->add_option("--global", f.global, "Max flips over the graph")
        ->check(CLI::NonNegativeNumber);
  cmd->add_option("--method", f.method, "Certifier")
      ->check(CLI::IsMember(
          {"poly-topk", "poly-max", "interval-topk", "interval-max"}));
  cmd->add_option("--mode", f.mode, "Admissible flip directions")
      ->check(CLI::IsMember({"both", "add-only", "delete-only"}));
  cmd->add_option("--output", f.output, "Write CSV here instead of stdout");
  cmd->add_option("--seed", f.seed, "Seed for randomized behaviour");
  cmd->add_option("--threads", f.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", f.lambda,
                  "Lower ReLU slope when |up| < |lo| (0 = minimum area)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--pure-poly", f.pure_poly,
                "Poly methods: do not combine margins with interval bounds");
}

PerturbationBudget budget_from(const Flags& f) {
  PerturbationBudget b;
  b.local = f.local;
  b.global = f.global;
  b.mode = f.mode == "add-only"      ? FlipMode::kAddOnly
           : f.mode == "delete-only" ? FlipMode::kDeleteOnly
                                     : FlipMode::kBoth;
  return b;
}

CertifyOptions options_from(const Flags& f) {
  CertifyOptions o;
  o.method = *parse_method(f.method);
  o.threads = f.threads;
  o.zero_lower_slope = f.lambda;
  o.intersect_interval = !f.pure_poly;
  return o;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo_text = text.substr(0, colon);
    const std::string hi_text = text.substr(colon + 1);
    const int lo = std::stoi(lo_text, &used_lo);
    const int hi = std::stoi(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size() || lo < 0 ||
        hi < lo)
      throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("--global-range expects LO:HI with 0 <= LO <= HI, got \"" +
                     text + "\"");
  }
}

// Sends CSV either to --output or to the given stream.
template <typename Writer>
void emit(const Flags& f, std::ostream& out, Writer&& write) {
  if (f.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(f.output, std::ios::binary);
  if (!file) throw DataError(f.output + ": cannot open file for writing");
  write(file);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Robustness certification for GCN node classifiers"};
  app.require_subcommand(1);
  Flags f;

  auto* certify_cmd = app.add_subcommand(
      "certify", "Sound per-node margins plus verified counterexamples");
  add_common(certify_cmd, f, true);

  auto* ce_cmd = app.add_subcommand(
      "counterexample", "Verified counterexamples of non-robust nodes");
  add_common(ce_cmd, f, true);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Lower/upper graph robustness over a global budget range");
  add_common(sweep_cmd, f, false);
  sweep_cmd->add_option("--global-range", f.global_range, "LO:HI")->required();

  auto* collective_cmd = app.add_subcommand(
      "collective", "Maximum robust global limit of every node");
  add_common(collective_cmd, f, false);
  collective_cmd->add_option("--cap", f.cap, "Search cap (default 100)")
      ->check(CLI::NonNegativeNumber);

  auto* train_cmd = app.add_subcommand(
      "train", "Robust training with finite-difference gradients");
  add_common(train_cmd, f, true);
  train_cmd->add_option("--labels", f.labels,
                        "CSV node,label of labeled nodes (others unlabeled)");
  train_cmd->add_option("--steps", f.steps, "Gradient steps")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr", f.learning_rate, "Learning rate");
  train_cmd->add_option("--loss", f.loss, "Robust loss")
      ->check(CLI::IsMember({"hinge", "bce"}));
  train_cmd->add_option("--batch", f.batch, "Nodes per step (0 = all)")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--model-out", f.model_out,
                        "Where to write the trained model")
      ->required();

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Exact robustness by exhaustive enumeration (small inputs)");
  add_common(oracle_cmd, f, true);
  oracle_cmd->add_option("--cap", f.cap,
                         "Max flip sets to enumerate (default 10^7 or "
                         "$GCNCERT_ORACLE_CAP)")
      ->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const Graph graph = load_graph(f.graph);
    const GcnModel model = load_model(f.model);
    model.validate_for(graph.num_features());
    const PerturbationBudget budget = budget_from(f);
    const CertifyOptions options = options_from(f);

    if (certify_cmd->parsed() || ce_cmd->parsed()) {
      const auto report = certify(model, graph, budget, options);
      emit(f, out, [&](std::ostream& s) {
        if (certify_cmd->parsed())
          write_certify_csv(s, report);
        else
          write_counterexample_csv(s, report);
      });
    } else if (sweep_cmd->parsed()) {
      const auto [lo, hi] = parse_range(f.global_range);
      const auto sweep = run_sweep(model, graph, budget, lo, hi, options);
      emit(f, out, [&](std::ostream& s) { write_sweep_csv(s, sweep); });
    } else if (collective_cmd->parsed()) {
      const int cap = f.cap < 0 ? kDefaultLimitCap : static_cast<int>(f.cap);
      const auto limits = max_robust_limits(model, graph, budget, cap, options);
      emit(f, out, [&](std::ostream& s) { write_collective_csv(s, limits); });
    } else if (train_cmd->parsed()) {
      std::vector<std::optional<int>> labels(
          static_cast<std::size_t>(graph.num_nodes()));
      if (!f.labels.empty()) labels = load_labels(f.labels, graph.num_nodes());
      for (const auto& l : labels)
        if (l && *l >= model.num_classes())
          throw DataError(f.labels + ": label " + std::to_string(*l) +
                          " exceeds the model's class count");
      RobustLossConfig config;
      config.kind = f.loss == "bce" ? LossKind::kBce : LossKind::kHinge;
      TrainOptions topts;
      topts.steps = f.steps;
      topts.learning_rate = f.learning_rate;
      topts.seed = f.seed;
      topts.batch_size = f.batch;
      topts.certify = options;
      const auto result =
          train_robust(model, graph, labels, budget, config, topts);
      save_model(result.model, f.model_out);
      emit(f, out, [&](std::ostream& s) {
        s << "step,loss\n";
        for (std::size_t t = 0; t < result.loss_trace.size(); ++t)
          s << t << ',' << format_real(result.loss_trace[t]) << '\n';
      });
    } else if (oracle_cmd->parsed()) {
      const std::uint64_t cap = f.cap < 0 ? oracle_cap_from_env()
                                          : static_cast<std::uint64_t>(f.cap);
      const auto robust = exact_robustness(model, graph, budget, cap);
      const auto labels = predict(model, graph).labels;
      emit(f, out, [&](std::ostream& s) {
        s << "node,label,robust\n";
        for (std::size_t i = 0; i < robust.size(); ++i)
          s << i << ',' << labels[i] << ',' << (robust[i] ? "true" : "false")
            << '\n';
      });
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OracleInfeasible& e) {
    err << "error: " << e.what() << '\n';
    return kExitOracleInfeasible;
  } catch (const std::invalid_argument& e) {
    // DataError and DimensionError.
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace gcncert
