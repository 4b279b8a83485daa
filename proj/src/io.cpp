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

#include "gcncert/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gcncert {
namespace {

using Json = nlohmann::json;

Json parse_document(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

void reject_unknown_keys(const Json& obj, const std::set<std::string>& known,
                         const std::string& path) {
  if (!obj.is_object()) throw DataError(path + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!known.contains(key))
      throw DataError(path + "." + key + ": unknown key");
}

const Json& require(const Json& obj, const std::string& key,
                    const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(path + "." + key + ": missing");
  return *it;
}

long long read_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer())
    throw DataError(path + ": expected an integer");
  return v.get<long long>();
}

double read_real(const Json& v, const std::string& path) {
  if (!v.is_number()) throw DataError(path + ": expected a number");
  return v.get<double>();
}

Matrix read_matrix(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty())
    throw DataError(path + ": expected a non-empty 2-D array");
  const auto rows = v.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!v[r].is_array()) throw DataError(rp + ": expected an array");
    if (r == 0) cols = v[r].size();
    if (v[r].size() != cols)
      throw DataError(rp + ": expected " + std::to_string(cols) + " entries");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          read_real(v[r][c], path + "[" + std::to_string(r) + "][" +
                                 std::to_string(c) + "]");
  return m;
}

Vector read_vector(const Json& v, const std::string& path) {
  if (!v.is_array()) throw DataError(path + ": expected an array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) =
        read_real(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open file for writing");
  out << content;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  const Json doc = parse_document(text, "graph");
  const std::string root = "graph";
  reject_unknown_keys(doc, {"num_nodes", "num_features", "edges", "features"},
                      root);
  const long long n = read_int(require(doc, "num_nodes", root), root + ".num_nodes");
  const long long m = read_int(require(doc, "num_features", root),
                               root + ".num_features");
  if (n <= 0) throw DataError(root + ".num_nodes: must be positive");
  if (m < 0) throw DataError(root + ".num_features: must be non-negative");

  const Json& edges = require(doc, "edges", root);
  if (!edges.is_array()) throw DataError(root + ".edges: expected an array");
  std::vector<std::pair<int, int>> edge_list;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string ep = root + ".edges[" + std::to_string(e) + "]";
    if (!edges[e].is_array() || edges[e].size() != 2)
      throw DataError(ep + ": expected a pair [i, j]");
    const long long a = read_int(edges[e][0], ep + "[0]");
    const long long b = read_int(edges[e][1], ep + "[1]");
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw DataError(ep + ": endpoint out of range [0, " + std::to_string(n) +
                      ")");
    edge_list.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }

  const Json& feats = require(doc, "features", root);
  const std::string fp = root + ".features";
  if (!feats.is_array() || feats.size() != static_cast<std::size_t>(n))
    throw DataError(fp + ": expected " + std::to_string(n) + " rows");
  Matrix x(n, m);
  for (long long i = 0; i < n; ++i) {
    const std::string rp = fp + "[" + std::to_string(i) + "]";
    const Json& row = feats[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(m))
      throw DataError(rp + ": expected " + std::to_string(m) + " entries");
    for (long long j = 0; j < m; ++j) {
      const std::string vp = rp + "[" + std::to_string(j) + "]";
      const long long v = read_int(row[static_cast<std::size_t>(j)], vp);
      if (v != 0 && v != 1) throw DataError(vp + ": expected 0 or 1");
      x(i, j) = static_cast<double>(v);
    }
  }
  return Graph::from_edges(static_cast<int>(n), edge_list, std::move(x));
}

GcnModel parse_model(std::string_view text) {
  const Json doc = parse_document(text, "model");
  const std::string root = "model";
  reject_unknown_keys(doc, {"layers"}, root);
  const Json& layers = require(doc, "layers", root);
  if (!layers.is_array() || layers.empty())
    throw DataError(root + ".layers: expected a non-empty array");
  GcnModel model;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string lp = root + ".layers[" + std::to_string(l) + "]";
    reject_unknown_keys(layers[l], {"weight", "bias"}, lp);
    GcnLayer layer;
    layer.weight = read_matrix(require(layers[l], "weight", lp), lp + ".weight");
    layer.bias = read_vector(require(layers[l], "bias", lp), lp + ".bias");
    model.layers.push_back(std::move(layer));
  }
  try {
    model.validate();
  } catch (const DimensionError& e) {
    throw DataError(root + ": " + e.what());
  }
  return model;
}

std::string dump_graph(const Graph& graph) {
  Json doc;
  doc["num_nodes"] = graph.num_nodes();
  doc["num_features"] = graph.num_features();
  Json edges = Json::array();
  for (int i = 0; i < graph.num_nodes(); ++i)
    for (int j = i; j < graph.num_nodes(); ++j)
      if (graph.adjacency(i, j) != 0.0) edges.push_back({i, j});
  doc["edges"] = std::move(edges);
  Json feats = Json::array();
  for (int i = 0; i < graph.num_nodes(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < graph.num_features(); ++j)
      row.push_back(static_cast<int>(graph.features(i, j)));
    feats.push_back(std::move(row));
  }
  doc["features"] = std::move(feats);
  return doc.dump(2) + "\n";
}

std::string dump_model(const GcnModel& model) {
  Json layers = Json::array();
  for (const auto& layer : model.layers) {
    Json bias = Json::array();
    for (Eigen::Index c = 0; c < layer.bias.size(); ++c)
      bias.push_back(layer.bias(c));
    layers.push_back({{"weight", matrix_json(layer.weight)},
                      {"bias", std::move(bias)}});
  }
  Json doc;
  doc["layers"] = std::move(layers);
  return doc.dump(2) + "\n";
}

Graph load_graph(const std::string& path) {
  try {
    return parse_graph(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

GcnModel load_model(const std::string& path) {
  try {
    return parse_model(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void save_graph(const Graph& graph, const std::string& path) {
  write_file(path, dump_graph(graph));
}

void save_model(const GcnModel& model, const std::string& path) {
  write_file(path, dump_model(model));
}

std::vector<std::optional<int>> load_labels(const std::string& path,
                                            int num_nodes) {
  std::istringstream in(read_file(path));
  std::vector<std::optional<int>> labels(static_cast<std::size_t>(num_nodes));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "node,label") continue;
    const auto comma = line.find(',');
    int node = -1, label = -1;
    const auto parse = [](std::string_view s, int& v) {
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      return r.ec == std::errc() && r.ptr == s.data() + s.size();
    };
    const std::string_view view(line);
    if (comma == std::string::npos || !parse(view.substr(0, comma), node) ||
        !parse(view.substr(comma + 1), label) || node < 0 ||
        node >= num_nodes || label < 0)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected \"node,label\" with node in range");
    labels[static_cast<std::size_t>(node)] = label;
  }
  return labels;
}

std::string format_real(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, r.ptr);
}

std::string format_flips(const FlipSet& flips) {
  std::string out;
  for (std::size_t f = 0; f < flips.size(); ++f) {
    if (f > 0) out += ';';
    out += std::to_string(flips[f].node) + ":" +
           std::to_string(flips[f].feature);
  }
  return out;
}

FlipSet parse_flips(std::string_view text) {
  FlipSet flips;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const std::string_view token = text.substr(0, semi);
    const auto colon = token.find(':');
    FeatureIndex idx;
    const auto a = std::from_chars(token.data(), token.data() + colon, idx.node);
    const auto b = colon == std::string_view::npos
                       ? std::from_chars_result{nullptr, std::errc::invalid_argument}
                       : std::from_chars(token.data() + colon + 1,
                                         token.data() + token.size(),
                                         idx.feature);
    if (colon == std::string_view::npos || a.ec != std::errc() ||
        b.ec != std::errc() || b.ptr != token.data() + token.size())
      throw DataError("malformed flip token \"" + std::string(token) + "\"");
    flips.push_back(idx);
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return flips;
}

void write_certify_csv(std::ostream& out, const CertificationReport& report) {
  out << "node,margin,certified,counterexample_flips\n";
  for (std::size_t i = 0; i < report.judgments.size(); ++i) {
    const auto& j = report.judgments[i];
    out << j.node << ',' << format_real(j.margin) << ','
        << (j.certified ? "true" : "false") << ',';
    if (i < report.counterexamples.size() && report.counterexamples[i])
      out << format_flips(report.counterexamples[i]->flips);
    out << '\n';
  }
}

void write_counterexample_csv(std::ostream& out,
                              const CertificationReport& report) {
  out << "node,original_label,flipped_label,flips\n";
  for (const auto& ce : report.counterexamples) {
    if (!ce || !ce->verified) continue;
    out << ce->node << ',' << ce->original_label << ',' << ce->flipped_label
        << ',' << format_flips(ce->flips) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const RobustnessSweep& sweep) {
  out << "p_l,p_g,lower,upper,runtime_ms\n";
  for (std::size_t t = 0; t < sweep.global_budgets.size(); ++t)
    out << sweep.local_budget << ',' << sweep.global_budgets[t] << ','
        << format_real(sweep.lower[t]) << ',' << format_real(sweep.upper[t])
        << ',' << format_real(sweep.runtime_ms[t]) << '\n';
}

void write_collective_csv(std::ostream& out, const RobustLimitVector& limits) {
  out << "node,max_robust_limit,never_certified\n";
  for (std::size_t i = 0; i < limits.limits.size(); ++i) {
    const auto& l = limits.limits[i];
    out << i << ',' << (l.capped ? ">=" : "") << l.limit << ','
        << (l.never_certified ? "true" : "false") << '\n';
  }
}

}  // namespace gcncert
