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

// JSON and CSV persistence for graphs, priors, greedy results, alpha
// estimates and reduced kPCA projectors.

#ifndef GSAMP_IO_HPP_
#define GSAMP_IO_HPP_

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsamp/alpha.hpp"
#include "gsamp/common.hpp"
#include "gsamp/graph.hpp"
#include "gsamp/kpca.hpp"
#include "gsamp/samplers.hpp"
#include "gsamp/signals.hpp"

namespace gsamp {

using Json = nlohmann::json;

// %.17g, enough digits to round-trip a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline Json to_json_array(const Vector& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Vector vector_from_json(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Index>(values.size()));
}

// ---- Graph ----------------------------------------------------------------

// {n, model_tag, seed, edges: [[i, j, weight], ...]} with i < j, nonzero
// weights only.
inline Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (Index i = 0; i < g.n; ++i)
    for (Index j = i + 1; j < g.n; ++j)
      if (g.adjacency(i, j) != 0.0)
        edges.push_back(Json::array({i, j, g.adjacency(i, j)}));
  return {{"n", g.n},
          {"model_tag", g.model_tag},
          {"seed", g.seed},
          {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const Json& j) {
  Graph g;
  g.n = j.at("n").get<Index>();
  require(g.n >= 1, "graph json: n must be >= 1");
  g.model_tag = j.value("model_tag", std::string("unknown"));
  g.seed = j.value("seed", std::uint64_t{0});
  g.adjacency = Matrix::Zero(g.n, g.n);
  for (const Json& e : j.at("edges")) {
    require(e.is_array() && e.size() == 3, "graph json: edges are [i, j, w]");
    const Index a = e[0].get<Index>();
    const Index b = e[1].get<Index>();
    const double w = e[2].get<double>();
    require(a >= 0 && b >= 0 && a < g.n && b < g.n && a != b,
            "graph json: edge endpoint out of range");
    g.adjacency(a, b) = g.adjacency(b, a) = w;
  }
  return g;
}

// ---- Prior ----------------------------------------------------------------

// {lambda, lambda_w, H: rows or "identity", K}.
inline Json prior_to_json(const Prior& p) {
  Json h;
  if (p.H) {
    h = Json::array();
    for (Index r = 0; r < p.H->rows(); ++r)
      h.push_back(to_json_array(p.H->row(r).transpose()));
  } else {
    h = "identity";
  }
  return {{"lambda", to_json_array(p.lambda)},
          {"lambda_w", to_json_array(p.lambda_w)},
          {"H", std::move(h)},
          {"K", p.basis->K}};
}

// The basis must come from the same graph; K indexes its eigen order.
inline Prior prior_from_json(const Json& j, const SpectralBasis& full_basis) {
  const NodeList K = j.at("K").get<NodeList>();
  auto basis = std::make_shared<const SpectralBasis>(with_band(full_basis, K));
  std::optional<Matrix> h;
  const Json& hj = j.at("H");
  if (hj.is_string()) {
    require(hj.get<std::string>() == "identity",
            "prior json: H must be \"identity\" or a row array");
  } else {
    const Index rows = static_cast<Index>(hj.size());
    require(rows >= 1, "prior json: H has no rows");
    Matrix m(rows, static_cast<Index>(hj[0].size()));
    for (Index r = 0; r < rows; ++r) {
      const Vector row = vector_from_json(hj[static_cast<std::size_t>(r)]);
      require(row.size() == m.cols(), "prior json: ragged H");
      m.row(r) = row.transpose();
    }
    h = std::move(m);
  }
  return make_prior(std::move(basis), vector_from_json(j.at("lambda")),
                    vector_from_json(j.at("lambda_w")), std::move(h));
}

// ---- Greedy results -----------------------------------------------------

inline Json greedy_result_to_json(const GreedyResult& r) {
  return {{"indices", r.set.indices},
          {"trajectory", r.objective_trajectory},
          {"gains", r.per_step_gain}};
}

inline GreedyResult greedy_result_from_json(const Json& j) {
  GreedyResult r;
  r.set.indices = j.at("indices").get<NodeList>();
  r.objective_trajectory = j.at("trajectory").get<std::vector<double>>();
  r.per_step_gain = j.at("gains").get<std::vector<double>>();
  r.set.trajectory = r.objective_trajectory;
  return r;
}

// ---- Alpha ----------------------------------------------------------------

inline Json alpha_estimate_to_json(const AlphaEstimate& a) {
  auto opt = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };
  Json witness = nullptr;
  if (a.witness)
    witness = {{"A", a.witness->A},
               {"B", a.witness->B},
               {"u", a.witness->u},
               {"ratio", a.witness->ratio}};
  return {{"alpha_exact", opt(a.alpha_exact)},
          {"alpha_lb_general", a.alpha_lb_general},
          {"alpha_lb_homeo", opt(a.alpha_lb_homeo)},
          {"mu_min", a.mu_min},
          {"mu_max", a.mu_max},
          {"kappa2_W", a.kappa2_W},
          {"gamma", opt(a.gamma)},
          {"triples_evaluated", a.triples_evaluated},
          {"triples_skipped", a.triples_skipped},
          {"witness", std::move(witness)}};
}

// ---- Reduced kPCA projector ---------------------------------------------

// {indices, P (row-major, k x |S|), k, sigma_w2, kernel: {type, d, c}}.
inline Json projector_to_json(const ReducedProjector& p) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(p.P.size()));
  for (Index r = 0; r < p.P.rows(); ++r)
    for (Index c = 0; c < p.P.cols(); ++c) flat.push_back(p.P(r, c));
  return {{"indices", p.S.indices},
          {"P", std::move(flat)},
          {"k", p.k},
          {"sigma_w2", p.sigma_w2},
          {"kernel",
           {{"type", "poly"}, {"d", p.kernel.degree}, {"c", p.kernel.offset}}}};
}

inline ReducedProjector projector_from_json(const Json& j) {
  ReducedProjector p;
  p.S.indices = j.at("indices").get<NodeList>();
  p.k = j.at("k").get<Index>();
  p.sigma_w2 = j.at("sigma_w2").get<double>();
  const Json& kern = j.at("kernel");
  require(kern.value("type", std::string("poly")) == "poly",
          "projector json: only polynomial kernels are supported");
  p.kernel.degree = kern.at("d").get<int>();
  p.kernel.offset = kern.value("c", 1.0);
  const auto flat = j.at("P").get<std::vector<double>>();
  const Index cols = static_cast<Index>(p.S.indices.size());
  require(static_cast<Index>(flat.size()) == p.k * cols,
          "projector json: P must hold k * |S| entries");
  p.P.resize(p.k, cols);
  for (Index r = 0; r < p.k; ++r)
    for (Index c = 0; c < cols; ++c)
      p.P(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  return p;
}

// ---- Files ----------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParameterError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path);
  out << text;
}

// Numeric CSV, one row per point. A first row that fails to parse as
// numbers is treated as a header.
inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      require(first, path + ": non-numeric row");
      first = false;
      continue;
    }
    first = false;
    require(rows.empty() || row.size() == rows.front().size(),
            path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), path + ": no data rows");
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return m;
}

inline std::string matrix_to_csv(const Matrix& m,
                                 const std::vector<std::string>& header = {}) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c)
    out += (c ? "," : "") + header[c];
  if (!header.empty()) out += '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c)
      out += (c ? "," : "") + format_double(m(r, c));
    out += '\n';
  }
  return out;
}

}  // namespace gsamp

#endif  // GSAMP_IO_HPP_
