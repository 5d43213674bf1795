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

// Bayesian model of a bandlimited graph signal observed in noise:
//   x = V_K xbar,  xbar ~ N(0, diag(lambda)),  y = x + w,  w ~ N(0, diag(lambda_w))
// and the quantity of interest z = H x.

#ifndef GSAMP_SIGNALS_HPP_
#define GSAMP_SIGNALS_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>

#include "gsamp/common.hpp"
#include "gsamp/rng.hpp"
#include "gsamp/spectral.hpp"

namespace gsamp {

struct Prior {
  std::shared_ptr<const SpectralBasis> basis;
  Vector lambda;    // signal spectrum variances, one per frequency in K
  Vector lambda_w;  // noise variances, one per node
  std::optional<Matrix> H;  // nullopt means the identity
  Matrix W;                 // V_K^T H^T H V_K
  std::optional<double> gamma;  // sigma_x^2 / sigma_w^2 when homeoscedastic

  const Matrix& V_K() const { return basis->V_K; }
  Index n() const { return basis->n(); }
  Index k() const { return basis->bandwidth(); }
  // Dimension of z = H x.
  Index m() const { return H ? H->rows() : n(); }
  bool homeoscedastic() const { return gamma.has_value(); }

  // H V_K, the map from spectrum to quantity of interest.
  Matrix HV_K() const { return H ? Matrix(*H * V_K()) : V_K(); }
};

namespace detail {

inline bool all_equal(const Vector& v, double tol) {
  if (v.size() == 0) return true;
  return (v.array() - v(0)).abs().maxCoeff() <= tol;
}

}  // namespace detail

inline Prior make_prior(std::shared_ptr<const SpectralBasis> basis,
                        Vector lambda, Vector lambda_w,
                        std::optional<Matrix> H = std::nullopt) {
  require(basis != nullptr, "make_prior: missing basis");
  const Index n = basis->n();
  const Index k = basis->bandwidth();
  require(k >= 1, "make_prior: basis has an empty frequency set");
  require(lambda.size() == k, "make_prior: lambda must have |K| entries");
  require(lambda_w.size() == n, "make_prior: lambda_w must have n entries");
  require(lambda.allFinite() && lambda_w.allFinite(),
          "make_prior: variances must be finite");
  require((lambda.array() > 0.0).all(),
          "make_prior: signal variances must be strictly positive "
          "(drop zero-variance frequencies from K)");
  require((lambda_w.array() > 0.0).all(),
          "make_prior: noise variances must be strictly positive");
  if (H) require(H->cols() == n, "make_prior: H must have n columns");

  Prior p;
  p.basis = std::move(basis);
  p.lambda = std::move(lambda);
  p.lambda_w = std::move(lambda_w);
  p.H = std::move(H);
  const Matrix hv = p.HV_K();
  p.W = symmetrized(hv.transpose() * hv);
  if (detail::all_equal(p.lambda, 1e-12) && detail::all_equal(p.lambda_w, 1e-12))
    p.gamma = p.lambda(0) / p.lambda_w(0);
  return p;
}

inline Prior make_prior(const SpectralBasis& basis, Vector lambda,
                        Vector lambda_w,
                        std::optional<Matrix> H = std::nullopt) {
  return make_prior(std::make_shared<const SpectralBasis>(basis),
                    std::move(lambda), std::move(lambda_w), std::move(H));
}

// Lambda = sigma_x2 I, Lambda_w = sigma_w2 I, H = I.
inline Prior homeoscedastic_prior(const SpectralBasis& basis, double sigma_x2,
                                  double sigma_w2) {
  return make_prior(basis, Vector::Constant(basis.bandwidth(), sigma_x2),
                    Vector::Constant(basis.n(), sigma_w2));
}

// rows x cols matrix of independent standard normal entries.
inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  CounterRng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix h(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) h(i, j) = normal(rng);
  return h;
}

// n independent Uniform[lo, hi] draws.
inline Vector uniform_vector(Index n, double lo, double hi,
                             std::uint64_t seed) {
  CounterRng rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = unif(rng);
  return v;
}

struct SignalDraw {
  Vector x;
  Vector xbar_K;
  Vector y;
  Vector w;
  std::uint64_t seed = 0;
};

inline SignalDraw draw_signal(const Prior& prior, std::uint64_t seed) {
  CounterRng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SignalDraw d;
  d.seed = seed;
  d.xbar_K.resize(prior.k());
  for (Index i = 0; i < prior.k(); ++i)
    d.xbar_K(i) = std::sqrt(prior.lambda(i)) * normal(rng);
  d.w.resize(prior.n());
  for (Index i = 0; i < prior.n(); ++i)
    d.w(i) = std::sqrt(prior.lambda_w(i)) * normal(rng);
  d.x = prior.V_K() * d.xbar_K;
  d.y = d.x + d.w;
  return d;
}

}  // namespace gsamp

#endif  // GSAMP_SIGNALS_HPP_
