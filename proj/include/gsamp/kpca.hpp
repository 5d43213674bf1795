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

// Subsampled kernel PCA.
//
// The Gram matrix Phi of a training set is treated as a graph adjacency.
// The kPCA projection ybar = V_K^T ytilde, ytilde_i = kappa(u_i, y), is then
// a partial graph Fourier transform, and ytilde can be interpolated from its
// samples on a set S chosen by greedy sampling:
//   ybar ≈ P ytilde_S,   P = V_K^T L*(S)   (k x |S|).
// Projecting a new point then costs |S| kernel evaluations instead of n.

#ifndef GSAMP_KPCA_HPP_
#define GSAMP_KPCA_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <utility>

#include "gsamp/common.hpp"
#include "gsamp/interp.hpp"
#include "gsamp/rng.hpp"
#include "gsamp/samplers.hpp"
#include "gsamp/signals.hpp"
#include "gsamp/spectral.hpp"

namespace gsamp {

// (r^T s + offset)^degree.
struct PolyKernel {
  int degree = 2;
  double offset = 1.0;

  template <class A, class B>
  double operator()(const Eigen::MatrixBase<A>& r,
                    const Eigen::MatrixBase<B>& s) const {
    require(r.size() == s.size(), "poly_kernel: dimension mismatch");
    return std::pow(r.dot(s) + offset, degree);
  }
};

inline double poly_kernel(const Vector& r, const Vector& s, int degree) {
  require(degree >= 1, "poly_kernel: degree must be >= 1");
  return PolyKernel{degree, 1.0}(r, s);
}

struct GramModel {
  Matrix data;   // n x dim, one training point per row
  Matrix Phi;    // n x n
  PolyKernel kernel;
  Index k = 0;   // retained components; 0 until kpca_basis
  std::shared_ptr<const SpectralBasis> basis;

  Index n() const { return Phi.rows(); }
};

inline GramModel gram_matrix(Matrix data, const PolyKernel& kernel) {
  require(data.rows() >= 1, "gram_matrix: need at least one point");
  require(kernel.degree >= 1, "gram_matrix: degree must be >= 1");
  const Index n = data.rows();
  GramModel g;
  g.kernel = kernel;
  g.Phi.resize(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i)
      g.Phi(i, j) = g.Phi(j, i) =
          kernel(data.row(i).transpose(), data.row(j).transpose());
  g.data = std::move(data);
  return g;
}

// Top-k eigenvectors of Phi by descending eigenvalue.
inline GramModel kpca_basis(GramModel model, Index k) {
  require(k >= 1 && k <= model.n(), "kpca_basis: k must lie in [1, n]");
  model.basis = std::make_shared<const SpectralBasis>(
      select_band(eigenbasis(model.Phi, EigenOrder::kSigned), k));
  model.k = k;
  return model;
}

// ytilde restricted to `nodes`: one kernel evaluation per listed node.
template <class Kernel>
Vector kernel_column(const Matrix& data, Kernel&& kernel, const Vector& y,
                     std::span<const Index> nodes) {
  Vector out(static_cast<Index>(nodes.size()));
  for (std::size_t c = 0; c < nodes.size(); ++c)
    out(static_cast<Index>(c)) = kernel(data.row(nodes[c]).transpose(), y);
  return out;
}

// Full kPCA projection V_K^T ytilde (n kernel evaluations).
inline Vector kpca_project(const GramModel& model, const Vector& y) {
  require(model.basis != nullptr, "kpca_project: basis not computed");
  require(y.size() == model.data.cols(), "kpca_project: dimension mismatch");
  Vector ytilde(model.n());
  for (Index i = 0; i < model.n(); ++i)
    ytilde(i) = model.kernel(model.data.row(i).transpose(), y);
  return model.basis->V_K.transpose() * ytilde;
}

// Prior on the Gram graph: Lambda = retained eigenvalues (floored at
// 1e-12 lambda_max), Lambda_w = sigma_w2 I, H = I.
inline Prior kpca_prior(const GramModel& model, double sigma_w2) {
  require(model.basis != nullptr, "kpca_prior: basis not computed");
  require(sigma_w2 > 0.0, "kpca_prior: regularizer must be positive");
  const Vector retained = model.basis->D.head(model.k);
  const double floor = 1e-12 * retained.maxCoeff();
  const Vector lambda = retained.cwiseMax(floor);
  if (!((lambda.array() > 0.0).all()))
    throw DomainError("kpca_prior: retained eigenvalues are not positive");
  return make_prior(model.basis, lambda, Vector::Constant(model.n(), sigma_w2));
}

struct ReducedProjector {
  Matrix P;  // k x |S|
  SamplingSet S;
  double sigma_w2 = 0.0;
  Index k = 0;
  PolyKernel kernel;
};

// P = V_K^T L*(S) for a given sampling set.
inline ReducedProjector reduced_projector_for(const GramModel& model,
                                              SamplingSet s, double sigma_w2) {
  const Prior prior = kpca_prior(model, sigma_w2);
  const Interpolator interp = optimal_interpolator(prior, s.indices);
  ReducedProjector proj;
  proj.P = model.basis->V_K.transpose() * interp.L;
  proj.S = std::move(s);
  proj.sigma_w2 = sigma_w2;
  proj.k = model.k;
  proj.kernel = model.kernel;
  return proj;
}

// Greedy-sampled reduced projector with `budget` samples.
inline ReducedProjector build_reduced_projector(const GramModel& model,
                                                Index budget, double sigma_w2) {
  const Prior prior = kpca_prior(model, sigma_w2);
  GreedyResult g = greedy_mse(prior, budget);
  return reduced_projector_for(model, std::move(g.set), sigma_w2);
}

// ybar ≈ P ytilde_S. Touches only the |S| sampled training points.
template <class Kernel>
Vector sub_project(const ReducedProjector& proj, const Matrix& data,
                   Kernel&& kernel, const Vector& y) {
  require(y.size() == data.cols(), "sub_project: dimension mismatch");
  return proj.P * kernel_column(data, kernel, y, proj.S.indices);
}

inline Vector sub_project(const ReducedProjector& proj, const Matrix& data,
                          const Vector& y) {
  return sub_project(proj, data, proj.kernel, y);
}

// Two noisy concentric circles in the plane: points alternate between the
// inner and outer circle; the radius carries N(0, noise^2) jitter.
inline Matrix two_circles(Index n, std::uint64_t seed, double inner = 1.0,
                          double outer = 3.0, double noise = 0.1) {
  CounterRng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, noise);
  Matrix pts(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double r = (i % 2 == 0 ? inner : outer) + jitter(rng);
    const double t = angle(rng);
    pts(i, 0) = r * std::cos(t);
    pts(i, 1) = r * std::sin(t);
  }
  return pts;
}

}  // namespace gsamp

#endif  // GSAMP_KPCA_HPP_
