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

// Optimal linear interpolation of z = H x from the samples y_S.
//
// Everything is computed in the |K|-dimensional inner space through
//   Z(S)    = Lambda^{-1} + sum_{i in S} lambda_w,i^{-1} v_i v_i^T
//   Kbar(S) = Z(S)^{-1}
//   K*(S)   = H V_K Kbar(S) V_K^T H^T,   MSE(S) = tr(W Kbar(S)).

#ifndef GSAMP_INTERP_HPP_
#define GSAMP_INTERP_HPP_

#include <span>
#include <string>
#include <vector>

#include "gsamp/common.hpp"
#include "gsamp/signals.hpp"

namespace gsamp {

struct SamplingSet {
  NodeList indices;
  // Objective value after each selection step, when produced by a greedy run.
  std::vector<double> trajectory;

  Index size() const { return static_cast<Index>(indices.size()); }
};

// Throws unless `s` holds distinct ids in [0, n).
inline void validate_sampling_set(std::span<const Index> s, Index n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Index i : s) {
    require(i >= 0 && i < n, "sampling set: node id " + std::to_string(i) +
                                 " out of range");
    require(!seen[static_cast<std::size_t>(i)],
            "sampling set: duplicate node id " + std::to_string(i));
    seen[static_cast<std::size_t>(i)] = 1;
  }
}

// Z(S). Repeated ids count once.
inline Matrix inner_precision(const Prior& prior, std::span<const Index> s) {
  const Index n = prior.n();
  Matrix z = prior.lambda.cwiseInverse().asDiagonal();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  const Matrix& vk = prior.V_K();
  for (Index i : s) {
    require(i >= 0 && i < n, "inner_precision: node id out of range");
    if (seen[static_cast<std::size_t>(i)]) continue;
    seen[static_cast<std::size_t>(i)] = 1;
    z.noalias() += (1.0 / prior.lambda_w(i)) * vk.row(i).transpose() * vk.row(i);
  }
  return z;
}

inline Matrix spd_inverse(const Matrix& z) {
  Eigen::LLT<Matrix> llt(z);
  if (llt.info() != Eigen::Success)
    throw DomainError("inner precision is not positive definite");
  return symmetrized(llt.solve(Matrix::Identity(z.rows(), z.cols())));
}

// tr(A B) for symmetric A, B.
inline double trace_of_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

struct ErrorState {
  Matrix Z;
  Matrix Kbar;
  double mse = 0.0;
};

inline ErrorState error_state(const Prior& prior, std::span<const Index> s) {
  ErrorState st;
  st.Z = inner_precision(prior, s);
  st.Kbar = spd_inverse(st.Z);
  st.mse = trace_of_product(prior.W, st.Kbar);
  return st;
}

inline double mse(const Prior& prior, std::span<const Index> s) {
  return error_state(prior, s).mse;
}

inline double mse(const Prior& prior, const SamplingSet& s) {
  return mse(prior, s.indices);
}

// K*(S), m x m.
inline Matrix error_covariance(const Prior& prior, std::span<const Index> s) {
  const Matrix hv = prior.HV_K();
  return symmetrized(hv * error_state(prior, s).Kbar * hv.transpose());
}

struct Interpolator {
  Matrix L;                  // m x |S|
  NodeList indices;          // column order of L
  double condition = 1.0;    // 2-norm condition number of the factored Z(S)
  bool ill_conditioned = false;  // condition above 1e12
};

// L* solving L C (Sigma + Lambda_w) C^T = H Sigma C^T. Evaluated in the
// information form L* = H V_K Z(S)^{-1} V_S^T Lambda_{w,S}^{-1}, which is the
// same matrix (Woodbury) but factors the |K| x |K| matrix Z(S) instead of the
// |S| x |S| covariance, whose conditioning degrades as lambda_w -> 0.
inline Interpolator optimal_interpolator(const Prior& prior,
                                         std::span<const Index> s) {
  require(!s.empty(), "optimal_interpolator: sampling set is empty");
  validate_sampling_set(s, prior.n());
  const Index k = prior.k();
  const Index size = static_cast<Index>(s.size());
  Matrix rhs(k, size);
  for (Index c = 0; c < size; ++c) {
    const Index node = s[static_cast<std::size_t>(c)];
    rhs.col(c) = prior.V_K().row(node).transpose() / prior.lambda_w(node);
  }
  const Matrix z = inner_precision(prior, s);
  Eigen::LLT<Matrix> llt(z);
  if (llt.info() != Eigen::Success)
    throw DomainError("optimal_interpolator: Z(S) is not positive definite");

  Interpolator out;
  out.indices.assign(s.begin(), s.end());
  out.L = prior.HV_K() * llt.solve(rhs);
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(
                        z, Eigen::EigenvaluesOnly).eigenvalues();
  out.condition = ev.maxCoeff() / ev.minCoeff();
  out.ill_conditioned = out.condition > 1e12;
  return out;
}

// y_S = C y.
inline Vector restrict_to(const Vector& y, std::span<const Index> s) {
  Vector out(static_cast<Index>(s.size()));
  for (std::size_t c = 0; c < s.size(); ++c) {
    require(s[c] >= 0 && s[c] < y.size(), "restrict_to: node id out of range");
    out(static_cast<Index>(c)) = y(s[c]);
  }
  return out;
}

// zhat = L* y_S.
inline Vector interpolate(const Interpolator& interp, const Vector& y_s) {
  require(y_s.size() == interp.L.cols(),
          "interpolate: sample vector length does not match |S|");
  return interp.L * y_s;
}

}  // namespace gsamp

#endif  // GSAMP_INTERP_HPP_
