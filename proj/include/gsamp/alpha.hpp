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

// Approximate supermodularity of set functions.
//
// f is alpha-supermodular when, for all A ⊆ B and u ∉ B,
//   f(A ∪ {u}) - f(A) <= alpha [f(B ∪ {u}) - f(B)].
// The largest such alpha is the minimum of the increment ratio over all
// triples. For the MSE the increment has the closed form
//   f(X ∪ {u}) - f(X) = -v_u^T Kbar W Kbar v_u / (lambda_w,u + v_u^T Kbar v_u)
// with Kbar = Kbar(X), so alpha only needs Kbar(X) for every subset X.

#ifndef GSAMP_ALPHA_HPP_
#define GSAMP_ALPHA_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "gsamp/common.hpp"
#include "gsamp/interp.hpp"
#include "gsamp/samplers.hpp"
#include "gsamp/signals.hpp"

namespace gsamp {

using SubsetMask = std::uint32_t;

inline NodeList mask_to_nodes(SubsetMask mask) {
  NodeList out;
  for (Index i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

struct AlphaWitness {
  NodeList A;
  NodeList B;
  Index u = -1;
  double ratio = 0.0;
};

struct AlphaEstimate {
  std::optional<double> alpha_exact;
  double alpha_lb_general = 0.0;
  std::optional<double> alpha_lb_homeo;
  std::optional<AlphaWitness> witness;
  double mu_min = 0.0;
  double mu_max = 0.0;
  double kappa2_W = 0.0;
  std::optional<double> gamma;
  std::uint64_t triples_evaluated = 0;
  std::uint64_t triples_skipped = 0;
};

inline constexpr Index kDefaultAlphaNodeCap = 12;

namespace detail {

inline void check_alpha_cap(Index n, Index cap) {
  if (n <= cap && n <= 20) return;
  std::uint64_t required = static_cast<std::uint64_t>(n);
  for (Index i = 0; i < n && required < UINT64_MAX / 3; ++i) required *= 3;
  throw InfeasibleError("alpha_exact: n = " + std::to_string(n) +
                            " exceeds the node cap of " + std::to_string(cap) +
                            " (3^n * n = " + std::to_string(required) +
                            " ratio evaluations)",
                        required);
}

// Minimum of incA / incB over all triples, where inc(X, u) is supplied by
// the caller. Pairs with both increments below `degenerate` in magnitude
// are skipped.
template <class Increment>
void minimize_increment_ratio(Index n, double degenerate, Increment&& inc,
                              AlphaEstimate& est) {
  const SubsetMask full = (SubsetMask{1} << n) - 1;
  double best = std::numeric_limits<double>::infinity();
  AlphaWitness witness;
  for (SubsetMask b = 0; b <= full; ++b) {
    for (Index u = 0; u < n; ++u) {
      const SubsetMask ubit = SubsetMask{1} << u;
      if (b & ubit) continue;
      const double inc_b = inc(b, u);
      SubsetMask a = b;
      while (true) {
        const double inc_a = inc(a, u);
        ++est.triples_evaluated;
        if (std::abs(inc_a) <= degenerate && std::abs(inc_b) <= degenerate) {
          ++est.triples_skipped;
        } else if (std::abs(inc_b) > degenerate) {
          // A vanishing B-increment gives ratio +inf, which never binds.
          const double ratio = inc_a / inc_b;
          if (ratio < best) {
            best = ratio;
            witness = {mask_to_nodes(a), mask_to_nodes(b), u, ratio};
          }
        }
        if (a == 0) break;
        a = (a - 1) & b;
      }
    }
    if (b == full) break;
  }
  if (std::isfinite(best)) {
    est.alpha_exact = best;
    est.witness = witness;
  }
}

}  // namespace detail

// Kbar(X) for every subset X of the n nodes, built by Sherman-Morrison
// updates from X minus its highest node.
inline std::vector<Matrix> all_subset_kbar(const Prior& prior) {
  const Index n = prior.n();
  const SubsetMask count = SubsetMask{1} << n;
  std::vector<Matrix> kbar(count);
  kbar[0] = prior.lambda.asDiagonal();
  const Matrix& vk = prior.V_K();
  for (SubsetMask x = 1; x < count; ++x) {
    Index top = 0;
    while ((x >> (top + 1)) != 0) ++top;
    const Matrix& parent = kbar[x & ~(SubsetMask{1} << top)];
    const Vector kv = parent * vk.row(top).transpose();
    const double denominator = prior.lambda_w(top) + vk.row(top).dot(kv);
    kbar[x] = symmetrized(parent - kv * kv.transpose() / denominator);
  }
  return kbar;
}

// Closed-form MSE increment tables: q = v_u^T Kbar(X) v_u and
// r = v_u^T Kbar(X) W Kbar(X) v_u for every (X, u).
struct IncrementTables {
  Index n = 0;
  std::vector<double> q;
  std::vector<double> r;
  double q_at(SubsetMask x, Index u) const {
    return q[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(u)];
  }
  double r_at(SubsetMask x, Index u) const {
    return r[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(u)];
  }
};

inline IncrementTables mse_increment_tables(const Prior& prior) {
  const Index n = prior.n();
  const std::vector<Matrix> kbar = all_subset_kbar(prior);
  IncrementTables t;
  t.n = n;
  t.q.resize(kbar.size() * static_cast<std::size_t>(n));
  t.r.resize(kbar.size() * static_cast<std::size_t>(n));
  const Matrix vt = prior.V_K().transpose();
  for (std::size_t x = 0; x < kbar.size(); ++x) {
    const Matrix kv = kbar[x] * vt;  // column u is Kbar v_u
    const Matrix wkv = prior.W * kv;
    for (Index u = 0; u < n; ++u) {
      const std::size_t at = x * static_cast<std::size_t>(n) +
                             static_cast<std::size_t>(u);
      t.q[at] = vt.col(u).dot(kv.col(u));
      t.r[at] = kv.col(u).dot(wkv.col(u));
    }
  }
  return t;
}

// MSE increment f(X ∪ {u}) - f(X) from the tables (u ∉ X).
inline double mse_increment(const Prior& prior, const IncrementTables& t,
                            SubsetMask x, Index u) {
  return -t.r_at(x, u) / (prior.lambda_w(u) + t.q_at(x, u));
}

// Ingredients of the general lower bound.
struct AlphaBoundTerms {
  double mu_min = 0.0;   // lambda_min(Lambda^{-1})
  double mu_max = 0.0;   // lambda_max(Lambda^{-1} + V_K^T Lambda_w^{-1} V_K)
  double lambda_w_max = 0.0;
  double kappa2_W = 0.0;
};

inline AlphaBoundTerms alpha_bound_terms(const Prior& prior) {
  const Vector w_ev =
      Eigen::SelfAdjointEigenSolver<Matrix>(prior.W, Eigen::EigenvaluesOnly)
          .eigenvalues();
  if (!(w_ev.minCoeff() > 1e-12 * w_ev.maxCoeff()))
    throw DomainError("alpha bound: W is singular; the bound requires W > 0");
  AlphaBoundTerms t;
  t.kappa2_W = w_ev.maxCoeff() / w_ev.minCoeff();
  t.mu_min = 1.0 / prior.lambda.maxCoeff();
  const Matrix& vk = prior.V_K();
  const Matrix full = Matrix(prior.lambda.cwiseInverse().asDiagonal()) +
                      vk.transpose() * prior.lambda_w.cwiseInverse().asDiagonal() * vk;
  t.mu_max = Eigen::SelfAdjointEigenSolver<Matrix>(symmetrized(full),
                                                   Eigen::EigenvaluesOnly)
                 .eigenvalues()
                 .maxCoeff();
  t.lambda_w_max = prior.lambda_w.maxCoeff();
  return t;
}

inline double alpha_lower_bound_general(const AlphaBoundTerms& t) {
  const double inv_lw = 1.0 / t.lambda_w_max;
  return (inv_lw + 1.0 / t.mu_max) / (inv_lw + 1.0 / t.mu_min) *
         (t.mu_min * t.mu_min) / (t.kappa2_W * t.mu_max * t.mu_max);
}

inline double alpha_lower_bound_general(const Prior& prior) {
  return alpha_lower_bound_general(alpha_bound_terms(prior));
}

// (1 + 2 gamma) / (kappa2 (1 + gamma)^4) for homeoscedastic priors.
inline double alpha_lower_bound_homeoscedastic(double gamma, double kappa2_w) {
  require(gamma >= 0.0, "alpha_lower_bound_homeoscedastic: gamma must be >= 0");
  require(kappa2_w >= 1.0,
          "alpha_lower_bound_homeoscedastic: condition number must be >= 1");
  return (1.0 + 2.0 * gamma) / (kappa2_w * std::pow(1.0 + gamma, 4));
}

// Exact alpha of the MSE by enumeration of all (A ⊆ B, u ∉ B).
// Increments smaller than 1e-14 f({}) on both sides are skipped.
inline AlphaEstimate alpha_exact(const Prior& prior,
                                 Index node_cap = kDefaultAlphaNodeCap) {
  const Index n = prior.n();
  detail::check_alpha_cap(n, node_cap);
  AlphaEstimate est;
  const IncrementTables t = mse_increment_tables(prior);
  const double f_empty = trace_of_product(prior.W, prior.lambda.asDiagonal());
  const double degenerate = 1e-14 * std::abs(f_empty);
  detail::minimize_increment_ratio(
      n, degenerate,
      [&](SubsetMask x, Index u) { return mse_increment(prior, t, x, u); },
      est);
  return est;
}

// Everything at once: exact alpha when n fits the cap, plus the bounds.
inline AlphaEstimate estimate_alpha(const Prior& prior,
                                    Index node_cap = kDefaultAlphaNodeCap) {
  AlphaEstimate est;
  if (prior.n() <= node_cap) est = alpha_exact(prior, node_cap);
  const AlphaBoundTerms terms = alpha_bound_terms(prior);
  est.mu_min = terms.mu_min;
  est.mu_max = terms.mu_max;
  est.kappa2_W = terms.kappa2_W;
  est.alpha_lb_general = alpha_lower_bound_general(terms);
  est.gamma = prior.gamma;
  if (prior.gamma)
    est.alpha_lb_homeo =
        alpha_lower_bound_homeoscedastic(*prior.gamma, terms.kappa2_W);
  return est;
}

// f on every subset of {0..n-1}, indexed by bitmask.
inline std::vector<double> all_subset_values(const Objective& objective,
                                             Index n,
                                             Index node_cap = 20) {
  detail::check_alpha_cap(n, node_cap);
  const SubsetMask count = SubsetMask{1} << n;
  std::vector<double> f(count);
  for (SubsetMask x = 0; x < count; ++x) f[x] = objective(mask_to_nodes(x));
  return f;
}

// Exact alpha of an arbitrary set function from its subset values. The
// degeneracy threshold is 1e-14 times the range of f.
inline AlphaEstimate alpha_exact_from_values(const std::vector<double>& f,
                                             Index n) {
  require(f.size() == (std::size_t{1} << n),
          "alpha_exact_from_values: table size must be 2^n");
  double range = 0.0;
  for (double v : f) range = std::max(range, std::abs(v - f[0]));
  AlphaEstimate est;
  detail::minimize_increment_ratio(
      n, 1e-14 * range,
      [&](SubsetMask x, Index u) {
        return f[x | (SubsetMask{1} << u)] - f[x];
      },
      est);
  return est;
}

// Number of triples violating f(A+u) - f(A) <= alpha [f(B+u) - f(B)] + slack.
inline std::uint64_t alpha_violations(const std::vector<double>& f, Index n,
                                      double alpha, double slack) {
  const SubsetMask full = (SubsetMask{1} << n) - 1;
  std::uint64_t violations = 0;
  for (SubsetMask b = 0;; ++b) {
    for (Index u = 0; u < n; ++u) {
      const SubsetMask ubit = SubsetMask{1} << u;
      if (b & ubit) continue;
      const double inc_b = f[b | ubit] - f[b];
      for (SubsetMask a = b;; a = (a - 1) & b) {
        const double inc_a = f[a | ubit] - f[a];
        if (inc_a > alpha * inc_b + slack) ++violations;
        if (a == 0) break;
      }
    }
    if (b == full) break;
  }
  return violations;
}

// (f(G) - f*) / (f({}) - f*), clamped to [0, 1].
inline double relative_suboptimality(double f_greedy, double f_star,
                                     double f_empty) {
  if (f_greedy < f_star - 1e-9 * std::abs(f_star))
    throw ConsistencyError(
        "relative_suboptimality: greedy value below the optimum");
  const double span = f_empty - f_star;
  if (!(span > 0.0)) {
    if (f_greedy <= f_star + 1e-9 * std::abs(f_star)) return 0.0;
    throw ParameterError(
        "relative_suboptimality: f_empty must exceed f_star");
  }
  return std::clamp((f_greedy - f_star) / span, 0.0, 1.0);
}

struct GreedyGuarantee {
  double exact = 1.0;      // (1 - alpha/k)^l
  double exp_bound = 1.0;  // exp(-alpha l / k)
};

inline GreedyGuarantee greedy_guarantee(double alpha, Index k, Index l) {
  require(k >= 1, "greedy_guarantee: k must be >= 1");
  require(alpha >= 0.0 && alpha <= static_cast<double>(k),
          "greedy_guarantee: alpha must lie in [0, k]");
  const double kk = static_cast<double>(k);
  const double ll = static_cast<double>(l);
  return {std::pow(1.0 - alpha / kk, ll), std::exp(-alpha * ll / kk)};
}

}  // namespace gsamp

#endif  // GSAMP_ALPHA_HPP_
