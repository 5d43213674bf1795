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

// Sampling set selection: greedy search (generic and rank-1 accelerated),
// the exhaustive oracle, and randomized / deterministic baselines.

#ifndef GSAMP_SAMPLERS_HPP_
#define GSAMP_SAMPLERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsamp/common.hpp"
#include "gsamp/interp.hpp"
#include "gsamp/rng.hpp"
#include "gsamp/signals.hpp"

namespace gsamp {

// A set function to be minimized. Both shipped objectives are monotone
// decreasing.
struct Objective {
  std::string name;
  std::function<double(std::span<const Index>)> eval;

  double operator()(std::span<const Index> s) const { return eval(s); }
};

inline Objective mse_objective(const Prior& prior) {
  return {"mse", [prior](std::span<const Index> s) { return mse(prior, s); }};
}

// log det Kbar(S) = -log det Z(S). Equals log det K*(S) up to a constant
// when H V_K is square and invertible; supermodular and decreasing.
inline double logdet_kbar(const Prior& prior, std::span<const Index> s) {
  Eigen::LLT<Matrix> llt(inner_precision(prior, s));
  if (llt.info() != Eigen::Success)
    throw DomainError("logdet: Z(S) is not positive definite");
  const Vector d = llt.matrixL().toDenseMatrix().diagonal();
  return -2.0 * d.array().log().sum();
}

inline Objective logdet_objective(const Prior& prior) {
  return {"logdet",
          [prior](std::span<const Index> s) { return logdet_kbar(prior, s); }};
}

struct GreedyResult {
  SamplingSet set;
  // f(G_j) after each step j = 1..l.
  std::vector<double> objective_trajectory;
  // Score of the node picked at each step (objective decrease).
  std::vector<double> per_step_gain;
  // Times the rank-1 state was rebuilt from scratch after drifting.
  int rebuilds = 0;
};

// Algorithm 1 for an arbitrary objective: add the node minimizing
// f(G ∪ {s}); ties go to the lowest index.
inline GreedyResult greedy_generic(const Objective& objective, Index n,
                                   Index budget) {
  require(budget >= 1 && budget <= n, "greedy_generic: budget must lie in [1, n]");
  GreedyResult res;
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  NodeList current;
  double previous = objective(current);
  for (Index step = 0; step < budget; ++step) {
    Index best = -1;
    double best_value = std::numeric_limits<double>::infinity();
    current.push_back(0);
    for (Index s = 0; s < n; ++s) {
      if (chosen[static_cast<std::size_t>(s)]) continue;
      current.back() = s;
      const double value = objective(current);
      if (best < 0 || value < best_value) {
        best = s;
        best_value = value;
      }
    }
    current.back() = best;
    chosen[static_cast<std::size_t>(best)] = 1;
    res.objective_trajectory.push_back(best_value);
    res.per_step_gain.push_back(previous - best_value);
    previous = best_value;
  }
  res.set.indices = current;
  res.set.trajectory = res.objective_trajectory;
  return res;
}

// Greedy MSE minimization with rank-1 updates of the inner error covariance.
// At each step the node maximizing
//   v_u^T Kbar W Kbar v_u / (lambda_w,u + v_u^T Kbar v_u)
// is added and Kbar <- Kbar - Kbar v_u v_u^T Kbar / (lambda_w,u + v_u^T Kbar v_u).
// O(n l |K|^2) overall. After each step tr(W Kbar) is compared against a
// direct inversion of Z(G_j); relative drift above 1e-6 resets Kbar.
inline GreedyResult greedy_mse(const Prior& prior, Index budget) {
  const Index n = prior.n();
  require(budget >= 1 && budget <= n, "greedy_mse: budget must lie in [1, n]");
  const Matrix& vk = prior.V_K();
  const Matrix& w = prior.W;

  Matrix kbar = prior.lambda.asDiagonal();
  Matrix z = prior.lambda.cwiseInverse().asDiagonal();
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  GreedyResult res;

  for (Index step = 0; step < budget; ++step) {
    const Matrix a = kbar * vk.transpose();  // column s is Kbar v_s
    const Matrix wa = w * a;
    Index best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    double best_denominator = 1.0;
    for (Index s = 0; s < n; ++s) {
      if (chosen[static_cast<std::size_t>(s)]) continue;
      const double q = vk.row(s).dot(a.col(s));
      const double denominator = prior.lambda_w(s) + q;
      const double score = a.col(s).dot(wa.col(s)) / denominator;
      if (best < 0 || score > best_score) {
        best = s;
        best_score = score;
        best_denominator = denominator;
      }
    }
    chosen[static_cast<std::size_t>(best)] = 1;
    res.set.indices.push_back(best);

    const Vector kv = a.col(best);
    kbar.noalias() -= (kv * kv.transpose()) / best_denominator;
    kbar = symmetrized(kbar);

    z.noalias() += (1.0 / prior.lambda_w(best)) * vk.row(best).transpose() *
                   vk.row(best);
    double value = trace_of_product(w, kbar);
    const Matrix direct = spd_inverse(z);
    const double direct_value = trace_of_product(w, direct);
    if (std::abs(value - direct_value) >
        1e-6 * std::max(std::abs(direct_value), 1e-300)) {
      kbar = direct;
      value = direct_value;
      ++res.rebuilds;
    }
    res.objective_trajectory.push_back(value);
    res.per_step_gain.push_back(best_score);
  }
  res.set.trajectory = res.objective_trajectory;
  return res;
}

// MSE after each prefix of `order` (entry j is MSE of the first j+1 nodes).
inline std::vector<double> prefix_mse(const Prior& prior,
                                      std::span<const Index> order) {
  validate_sampling_set(order, prior.n());
  Matrix z = prior.lambda.cwiseInverse().asDiagonal();
  std::vector<double> out;
  out.reserve(order.size());
  for (Index i : order) {
    z.noalias() += (1.0 / prior.lambda_w(i)) * prior.V_K().row(i).transpose() *
                   prior.V_K().row(i);
    Eigen::LLT<Matrix> llt(z);
    out.push_back(llt.solve(prior.W).trace());
  }
  return out;
}

// Calls fn(combination) for every k-subset of {0..n-1} in lexicographic
// order.
template <class Fn>
void for_each_combination(Index n, Index k, Fn&& fn) {
  NodeList c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), Index{0});
  if (k > n) return;
  while (true) {
    fn(std::as_const(c));
    Index i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++c[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

struct ExhaustiveResult {
  SamplingSet set;
  double value = 0.0;
  std::uint64_t evaluated = 0;
};

namespace detail {

inline void check_enumeration_cap(Index n, Index k, std::uint64_t cap) {
  require(k >= 0 && k <= n, "exhaustive_optimal: k must lie in [0, n]");
  const std::uint64_t count = binomial(static_cast<std::uint64_t>(n),
                                       static_cast<std::uint64_t>(k));
  if (count > cap)
    throw InfeasibleError("exhaustive_optimal: C(" + std::to_string(n) + ", " +
                              std::to_string(k) + ") = " +
                              std::to_string(count) +
                              " sets exceeds the enumeration cap of " +
                              std::to_string(cap),
                          count);
}

}  // namespace detail

// Global minimizer of an objective over all k-subsets; ties keep the
// lexicographically first set.
inline ExhaustiveResult exhaustive_optimal(
    const Objective& objective, Index n, Index k,
    std::uint64_t cap = kDefaultEnumerationCap) {
  detail::check_enumeration_cap(n, k, cap);
  ExhaustiveResult best;
  best.value = std::numeric_limits<double>::infinity();
  for_each_combination(n, k, [&](const NodeList& c) {
    const double v = objective(c);
    ++best.evaluated;
    if (best.evaluated == 1 || v < best.value) {
      best.value = v;
      best.set.indices = c;
    }
  });
  return best;
}

// MSE-specialized oracle: Z is built incrementally along the combination
// prefix so each candidate costs one rank-1 add and one |K| x |K| solve.
inline ExhaustiveResult exhaustive_optimal(
    const Prior& prior, Index k, std::uint64_t cap = kDefaultEnumerationCap) {
  const Index n = prior.n();
  detail::check_enumeration_cap(n, k, cap);
  ExhaustiveResult best;
  best.value = std::numeric_limits<double>::infinity();
  if (k == 0) {
    best.value = mse(prior, NodeList{});
    best.evaluated = 1;
    return best;
  }
  const Matrix& vk = prior.V_K();
  std::vector<Matrix> outer(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    outer[static_cast<std::size_t>(i)] =
        (1.0 / prior.lambda_w(i)) * vk.row(i).transpose() * vk.row(i);
  // prefix[j] = Z of the first j entries of the current combination.
  std::vector<Matrix> prefix(static_cast<std::size_t>(k + 1));
  prefix[0] = prior.lambda.cwiseInverse().asDiagonal();
  NodeList last(static_cast<std::size_t>(k), -1);
  Eigen::LLT<Matrix> llt(prior.k());
  for_each_combination(n, k, [&](const NodeList& c) {
    std::size_t j = 0;
    while (j < c.size() && c[j] == last[j]) ++j;
    for (; j < c.size(); ++j)
      prefix[j + 1] = prefix[j] + outer[static_cast<std::size_t>(c[j])];
    last = c;
    llt.compute(prefix.back());
    const double v = llt.solve(prior.W).trace();
    ++best.evaluated;
    if (best.evaluated == 1 || v < best.value) {
      best.value = v;
      best.set.indices = c;
    }
  });
  return best;
}

// k distinct nodes, uniformly without replacement (in draw order).
inline SamplingSet sample_uniform(Index n, Index k, std::uint64_t seed) {
  require(k >= 0 && k <= n, "sample_uniform: k must lie in [0, n]");
  CounterRng rng(seed);
  NodeList pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return {pool, {}};
}

// k distinct nodes drawn one at a time with probability proportional to
// ||v_i||^2 among the nodes not yet drawn. Falls back to uniform once the
// remaining leverage mass is zero.
inline SamplingSet sample_leverage(const Prior& prior, Index k,
                                   std::uint64_t seed) {
  const Index n = prior.n();
  require(k >= 0 && k <= n, "sample_leverage: k must lie in [0, n]");
  CounterRng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector weight = prior.basis->leverage_scores();
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  SamplingSet out;
  for (Index draw = 0; draw < k; ++draw) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i)
      if (!taken[static_cast<std::size_t>(i)]) total += weight(i);
    Index pick = -1;
    if (total > 0.0) {
      const double target = unif(rng) * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (taken[static_cast<std::size_t>(i)] || weight(i) <= 0.0) continue;
        acc += weight(i);
        pick = i;
        if (target < acc) break;
      }
    } else {
      const Index remaining = n - draw;
      std::uniform_int_distribution<Index> u(0, remaining - 1);
      Index skip = u(rng);
      for (Index i = 0; i < n; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        if (skip-- == 0) {
          pick = i;
          break;
        }
      }
    }
    taken[static_cast<std::size_t>(pick)] = 1;
    out.indices.push_back(pick);
  }
  return out;
}

// Top-k nodes by ||v_i||^2, ties to the lowest index.
inline SamplingSet rank_leverage(const Prior& prior, Index k) {
  const Index n = prior.n();
  require(k >= 0 && k <= n, "rank_leverage: k must lie in [0, n]");
  const Vector lev = prior.basis->leverage_scores();
  NodeList order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return lev(a) > lev(b); });
  order.resize(static_cast<std::size_t>(k));
  return {order, {}};
}

}  // namespace gsamp

#endif  // GSAMP_SAMPLERS_HPP_
