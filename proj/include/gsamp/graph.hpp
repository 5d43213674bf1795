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

// Random undirected graph models. Each generator draws the upper triangle
// only and mirrors it, so the adjacency is exactly symmetric with a zero
// diagonal.

#ifndef GSAMP_GRAPH_HPP_
#define GSAMP_GRAPH_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gsamp/common.hpp"
#include "gsamp/rng.hpp"

namespace gsamp {

struct Graph {
  Index n = 0;
  Matrix adjacency;
  std::string model_tag;
  std::uint64_t seed = 0;

  Index edge_count() const {
    Index count = 0;
    for (Index j = 1; j < n; ++j)
      for (Index i = 0; i < j; ++i)
        if (adjacency(i, j) != 0.0) ++count;
    return count;
  }

  Vector degrees() const { return adjacency.rowwise().sum(); }
};

namespace detail {

inline void mirror_upper(Matrix& a) {
  for (Index j = 1; j < a.cols(); ++j)
    for (Index i = 0; i < j; ++i) a(j, i) = a(i, j);
}

}  // namespace detail

// G(n, p): each unordered pair gets a unit edge with probability p.
inline Graph gen_erdos_renyi(Index n, double p, std::uint64_t seed) {
  require(n >= 1, "gen_erdos_renyi: n must be >= 1");
  require(p >= 0.0 && p <= 1.0, "gen_erdos_renyi: p must lie in [0, 1]");
  CounterRng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i) a(i, j) = unif(rng) < p ? 1.0 : 0.0;
  detail::mirror_upper(a);
  return Graph{n, std::move(a), "erdos_renyi", seed};
}

// Preferential attachment with one edge per arriving node. Nodes 0 and 1
// start connected; node t then links to an existing node chosen with
// probability proportional to its current degree. The result is a tree.
inline Graph gen_preferential_attachment(Index n, std::uint64_t seed) {
  require(n >= 2, "gen_preferential_attachment: n must be >= 2");
  CounterRng rng(seed);
  Matrix a = Matrix::Zero(n, n);
  // Each edge contributes both endpoints, so a uniform pick from this list
  // is a degree-proportional pick.
  std::vector<Index> endpoints;
  endpoints.reserve(static_cast<std::size_t>(2 * (n - 1)));
  a(0, 1) = 1.0;
  endpoints.push_back(0);
  endpoints.push_back(1);
  for (Index t = 2; t < n; ++t) {
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    const Index target = endpoints[pick(rng)];
    a(target, t) = 1.0;
    endpoints.push_back(target);
    endpoints.push_back(t);
  }
  detail::mirror_upper(a);
  return Graph{n, std::move(a), "preferential_attachment", seed};
}

// Complete graph with independent Uniform[0, 1] weights.
inline Graph gen_random_weighted(Index n, std::uint64_t seed) {
  require(n >= 1, "gen_random_weighted: n must be >= 1");
  CounterRng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i) a(i, j) = unif(rng);
  detail::mirror_upper(a);
  return Graph{n, std::move(a), "random_weighted", seed};
}

enum class GraphModel { kErdosRenyi, kPreferentialAttachment, kRandomWeighted };

inline GraphModel parse_graph_model(const std::string& name) {
  if (name == "er" || name == "erdos_renyi") return GraphModel::kErdosRenyi;
  if (name == "pa" || name == "preferential_attachment")
    return GraphModel::kPreferentialAttachment;
  if (name == "rw" || name == "random_weighted")
    return GraphModel::kRandomWeighted;
  throw ParameterError("unknown graph model '" + name + "'");
}

inline const char* graph_model_name(GraphModel model) {
  switch (model) {
    case GraphModel::kErdosRenyi: return "erdos_renyi";
    case GraphModel::kPreferentialAttachment: return "preferential_attachment";
    case GraphModel::kRandomWeighted: return "random_weighted";
  }
  return "unknown";
}

// `p` is only used by the Erdos-Renyi model.
inline Graph generate(GraphModel model, Index n, std::uint64_t seed,
                      double p = 0.2) {
  switch (model) {
    case GraphModel::kErdosRenyi: return gen_erdos_renyi(n, p, seed);
    case GraphModel::kPreferentialAttachment:
      return gen_preferential_attachment(n, seed);
    case GraphModel::kRandomWeighted: return gen_random_weighted(n, seed);
  }
  throw ParameterError("unknown graph model");
}

}  // namespace gsamp

#endif  // GSAMP_GRAPH_HPP_
