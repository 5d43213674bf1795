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

// Sampling-set-independent bounds on the interpolation MSE.
//
// For any S with |S| = m:
//   |K|^2 / (tr[(W Lambda)^{-1}] + L_m)  <=  MSE(S)  <=  tr(W Lambda)
// where L_m is the sum of the m largest weighted structural SNRs
//   ell_i = lambda_w,i^{-1} v_i^T W^{-1} v_i.

#ifndef GSAMP_BOUNDS_HPP_
#define GSAMP_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "gsamp/common.hpp"
#include "gsamp/signals.hpp"

namespace gsamp {

namespace detail {

// Factor W after checking the W > 0 hypothesis with a relative threshold.
inline Eigen::LLT<Matrix> factor_w(const Prior& prior) {
  const Vector ev =
      Eigen::SelfAdjointEigenSolver<Matrix>(prior.W, Eigen::EigenvaluesOnly)
          .eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * ev.maxCoeff()))
    throw DomainError(
        "W = V_K^T H^T H V_K is singular; the MSE bounds require W > 0");
  Eigen::LLT<Matrix> llt(prior.W);
  if (llt.info() != Eigen::Success)
    throw DomainError("W is not positive definite");
  return llt;
}

}  // namespace detail

// ell_i for every node.
inline Vector structural_snrs(const Prior& prior) {
  const Eigen::LLT<Matrix> llt = detail::factor_w(prior);
  const Matrix vt = prior.V_K().transpose();  // k x n, column i is v_i
  const Matrix u = llt.solve(vt);
  Vector ell = vt.cwiseProduct(u).colwise().sum().transpose();
  ell.array() /= prior.lambda_w.array();
  return ell.cwiseMax(0.0);
}

// Eigenvalues of W Lambda, via the similar symmetric matrix
// Lambda^{1/2} W Lambda^{1/2}.
inline Vector w_lambda_eigenvalues(const Prior& prior) {
  const Vector root = prior.lambda.cwiseSqrt();
  const Matrix s = root.asDiagonal() * prior.W * root.asDiagonal();
  return Eigen::SelfAdjointEigenSolver<Matrix>(symmetrized(s),
                                               Eigen::EigenvaluesOnly)
      .eigenvalues();
}

struct BoundsReport {
  Index k = 0;
  Vector ell;
  // ell_sorted_prefix[m] = L_m, m = 0..n.
  std::vector<double> ell_sorted_prefix;
  double ell_max = 0.0;
  double trace_WLambda_inv = 0.0;
  double upper = 0.0;

  Index n() const { return ell.size(); }

  double L(Index m) const {
    require(m >= 0 && m < static_cast<Index>(ell_sorted_prefix.size()),
            "BoundsReport: sample count out of range");
    return ell_sorted_prefix[static_cast<std::size_t>(m)];
  }

  // Lower bound on MSE(S) over all |S| = m.
  double lower(Index m) const {
    const double kk = static_cast<double>(k);
    return kk * kk / (trace_WLambda_inv + L(m));
  }
};

inline BoundsReport bounds_report(const Prior& prior) {
  BoundsReport r;
  r.k = prior.k();
  r.ell = structural_snrs(prior);
  std::vector<double> sorted(r.ell.data(), r.ell.data() + r.ell.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  r.ell_sorted_prefix.assign(sorted.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i)
    r.ell_sorted_prefix[i + 1] = r.ell_sorted_prefix[i] + sorted[i];
  r.ell_max = sorted.empty() ? 0.0 : sorted.front();

  const Eigen::LLT<Matrix> llt = detail::factor_w(prior);
  const Matrix w_inv = llt.solve(Matrix::Identity(r.k, r.k));
  // tr[(W Lambda)^{-1}] = tr[Lambda^{-1} W^{-1}].
  r.trace_WLambda_inv = (w_inv.diagonal().array() / prior.lambda.array()).sum();
  r.upper = (prior.W.diagonal().array() * prior.lambda.array()).sum();
  return r;
}

struct UniversalBounds {
  double lower = 0.0;
  double upper = 0.0;
};

inline UniversalBounds universal_bounds(const Prior& prior, Index m) {
  require(m >= 0 && m <= prior.n(), "universal_bounds: m must lie in [0, n]");
  const BoundsReport r = bounds_report(prior);
  return {r.lower(m), r.upper};
}

// |K| / (lambda_min(W Lambda)^{-1} + ell_max), for |S| >= |K|.
inline double uniform_recovery_bound(const Prior& prior) {
  const BoundsReport r = bounds_report(prior);
  const double lambda_min = w_lambda_eigenvalues(prior).minCoeff();
  return static_cast<double>(r.k) / (1.0 / lambda_min + r.ell_max);
}

struct SetSizeBound {
  // Right-hand side of L_|S| >= (|K|^2 - eta tr[(W Lambda)^{-1}]) / eta.
  double L_bound = 0.0;
  // ceil(L_bound / ell_max) clamped at 0.
  Index size_bound = 0;
  // Smallest m with L_m >= L_bound (up to round-off); nullopt when even L_n
  // falls short, in which case no sampling set reaches eta.
  std::optional<Index> prefix_size_bound;
};

inline SetSizeBound min_set_size_bound(const BoundsReport& r, double eta) {
  require(eta > 0.0, "min_set_size_bound: eta must be positive");
  const double kk = static_cast<double>(r.k);
  SetSizeBound b;
  b.L_bound = (kk * kk - eta * r.trace_WLambda_inv) / eta;
  // Relative slack of 1e-12 absorbs round-off when the bound is tight.
  const double slack = 1e-12 * std::max(1.0, std::abs(b.L_bound));
  if (b.L_bound <= slack) {
    b.size_bound = 0;
    b.prefix_size_bound = 0;
    return b;
  }
  b.size_bound = r.ell_max > 0.0
                     ? static_cast<Index>(std::ceil((b.L_bound - slack) / r.ell_max))
                     : r.n() + 1;
  for (Index m = 0; m <= r.n(); ++m) {
    if (r.L(m) >= b.L_bound - slack) {
      b.prefix_size_bound = m;
      break;
    }
  }
  return b;
}

inline SetSizeBound min_set_size_bound(const Prior& prior, double eta) {
  return min_set_size_bound(bounds_report(prior), eta);
}

}  // namespace gsamp

#endif  // GSAMP_BOUNDS_HPP_
