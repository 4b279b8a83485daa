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

#ifndef GCNCERT_IO_HPP_
#define GCNCERT_IO_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcncert/certification.hpp"
#include "gcncert/collective.hpp"
#include "gcncert/graph_model.hpp"
#include "gcncert/metrics.hpp"

namespace gcncert {

// Graph documents:
//   {"num_nodes": n, "num_features": m,
//    "edges": [[i, j], ...], "features": [[0, 1, ...], ...]}
// Model documents:
//   {"layers": [{"weight": [[...], ...], "bias": [...]}, ...]}
// Parse failures and invariant violations throw DataError with the offending
// field path in the message.
Graph parse_graph(std::string_view text);
GcnModel parse_model(std::string_view text);
std::string dump_graph(const Graph& graph);
std::string dump_model(const GcnModel& model);

Graph load_graph(const std::string& path);
GcnModel load_model(const std::string& path);
void save_graph(const Graph& graph, const std::string& path);
void save_model(const GcnModel& model, const std::string& path);

// Node labels as CSV "node,label"; unlisted nodes are unlabeled.
std::vector<std::optional<int>> load_labels(const std::string& path,
                                            int num_nodes);

// Shortest decimal form that parses back to the same double.
std::string format_real(double value);
// "node:feature" tokens joined by ';'.
std::string format_flips(const FlipSet& flips);
FlipSet parse_flips(std::string_view text);

void write_certify_csv(std::ostream& out, const CertificationReport& report);
void write_counterexample_csv(std::ostream& out,
                              const CertificationReport& report);
void write_sweep_csv(std::ostream& out, const RobustnessSweep& sweep);
void write_collective_csv(std::ostream& out, const RobustLimitVector& limits);

}  // namespace gcncert

#endif  // GCNCERT_IO_HPP_
