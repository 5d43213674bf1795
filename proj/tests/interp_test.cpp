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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "gsamp/interp.hpp"
#include "test_util.hpp"

namespace gsamp {
namespace {

using testing::random_prior;
using testing::RandomPriorOptions;

// n = 2, V_K = e_0, Lambda = 1, Lambda_w = (1, 1), H = I.
Prior scalar_prior() {
  Graph g{2, Matrix::Zero(2, 2), "custom", 0};
  g.adjacency(0, 0) = 2.0;
  g.adjacency(1, 1) = 1.0;
  return make_prior(select_band(spectral_basis(g), 1), Vector::Ones(1),
                    Vector::Ones(2));
}

TEST(ErrorCovariance, EmptySetIsPriorCovariance) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Prior p = random_prior(s, {.n = 9, .k = 3, .h_rows = 7});
    const Matrix hv = p.HV_K();
    const Matrix expected = hv * p.lambda.asDiagonal() * hv.transpose();
    EXPECT_LE((error_covariance(p, NodeList{}) - expected).norm(),
              1e-12 * expected.norm());
  }
}

TEST(ErrorCovariance, ScalarCase) {
  const Prior p = scalar_prior();
  const ErrorState st = error_state(p, NodeList{0});
  EXPECT_NEAR(st.Kbar(0, 0), 0.5, 1e-15);
  const Matrix k = error_covariance(p, NodeList{0});
  EXPECT_NEAR(k(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(k(1, 1), 0.0, 1e-15);
  EXPECT_NEAR(k(0, 1), 0.0, 1e-15);
}

TEST(ErrorCovariance, MatchesOuterSpaceFormula) {
  std::mt19937_64 rng(5);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Prior p = random_prior(s, {.n = 8, .k = 3, .h_rows = s % 2 ? 5 : 0});
    const NodeList set = testing::random_subset(8, rng);
    const Matrix ref = testing::reference_error_covariance(p, set);
    EXPECT_LE((error_covariance(p, set) - ref).norm(), 1e-9 * ref.norm());
  }
}

TEST(ErrorCovariance, MatchesMonteCarlo) {
  const Prior p = random_prior(31, {.n = 8, .k = 3});
  const NodeList set = {1, 4, 6};
  const Interpolator interp = optimal_interpolator(p, set);
  const int draws = 100000;
  Matrix acc = Matrix::Zero(8, 8);
  for (int t = 0; t < draws; ++t) {
    const SignalDraw d = draw_signal(p, sub_seed(4242, t));
    const Vector e = d.x - interpolate(interp, restrict_to(d.y, set));
    acc.noalias() += e * e.transpose();
  }
  acc /= draws;
  const Matrix k = error_covariance(p, set);
  EXPECT_LE((acc - k).norm() / k.norm(), 0.05);
}

TEST(ErrorState, InverseIdentityAndNonnegativity) {
  std::mt19937_64 rng(8);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Prior p = random_prior(s, {.n = 10, .k = 4});
    const ErrorState st = error_state(p, testing::random_subset(10, rng));
    EXPECT_LE((st.Z * st.Kbar - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_GE(st.mse, 0.0);
  }
}

TEST(Mse, EmptySetIsTraceWLambda) {
  const Prior p = random_prior(2, {.n = 10, .k = 4, .h_rows = 6});
  EXPECT_NEAR(mse(p, NodeList{}),
              (p.W * p.lambda.asDiagonal().toDenseMatrix()).trace(), 1e-12);
}

TEST(Mse, IdentityPriorEmptySetIsBandwidth) {
  const SpectralBasis b = select_band(spectral_basis(gen_random_weighted(9, 1)), 4);
  const Prior p = make_prior(b, Vector::Ones(4), Vector::Ones(9));
  EXPECT_NEAR(mse(p, NodeList{}), 4.0, 1e-12);
}

TEST(Mse, AgreesWithOuterTrace) {
  std::mt19937_64 rng(9);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Prior p = random_prior(100 + s, {.n = 8, .k = 3, .h_rows = 6});
    const NodeList set = testing::random_subset(8, rng);
    EXPECT_NEAR(mse(p, set), error_covariance(p, set).trace(),
                1e-10 * std::max(1.0, mse(p, set)));
  }
}

TEST(Mse, RepeatedNodeCountsOnce) {
  const Prior p = random_prior(3, {.n = 8, .k = 3});
  EXPECT_DOUBLE_EQ(mse(p, NodeList{2, 5, 2}), mse(p, NodeList{2, 5}));
}

TEST(Mse, MonotoneAndPositive) {
  std::mt19937_64 rng(10);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Prior p = random_prior(200 + s, {.n = 10, .k = 3});
    NodeList b = testing::random_subset(10, rng, 0.6);
    NodeList a;
    for (Index i : b)
      if (rng() % 2) a.push_back(i);
    EXPECT_GE(mse(p, a), mse(p, b) - 1e-10);
    NodeList all(10);
    std::iota(all.begin(), all.end(), Index{0});
    EXPECT_GT(mse(p, all), 0.0);
  }
}

TEST(Monotonicity, NestedErrorCovarianceDifferenceIsPsd) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Prior p = random_prior(static_cast<std::uint64_t>(trial % 50),
                                 {.n = 9, .k = 3, .h_rows = trial % 3 ? 0 : 6});
    const NodeList b = testing::random_subset(9, rng, 0.6);
    NodeList a;
    for (Index i : b)
      if (rng() % 2) a.push_back(i);
    const Matrix ka = error_covariance(p, a);
    const Matrix kb = error_covariance(p, b);
    const double scale =
        std::max(1.0, Eigen::SelfAdjointEigenSolver<Matrix>(ka, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .cwiseAbs()
                          .maxCoeff());
    ASSERT_GE(testing::min_eigenvalue(ka - kb), -1e-9 * scale) << "trial " << trial;
  }
}

TEST(OptimalInterpolator, ScalarWienerWeight) {
  const Interpolator interp = optimal_interpolator(scalar_prior(), NodeList{0});
  ASSERT_EQ(interp.L.rows(), 2);
  ASSERT_EQ(interp.L.cols(), 1);
  EXPECT_NEAR(interp.L(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(interp.L(1, 0), 0.0, 1e-15);
}

TEST(OptimalInterpolator, NoiselessFullSetIsProjector) {
  const SpectralBasis b = select_band(spectral_basis(gen_random_weighted(12, 6)), 4);
  const Prior p = make_prior(b, Vector::LinSpaced(4, 1, 3), Vector::Constant(12, 1e-12));
  NodeList all(12);
  std::iota(all.begin(), all.end(), Index{0});
  const Interpolator interp = optimal_interpolator(p, all);
  const Matrix proj = b.V_K * b.V_K.transpose();
  EXPECT_LE((interp.L - proj).cwiseAbs().maxCoeff(), 1e-5);

  const SignalDraw d = draw_signal(p, 3);
  const Vector zhat = interpolate(interp, restrict_to(d.y, all));
  EXPECT_LE((zhat - d.x).norm(), 1e-5 * d.x.norm());
}

TEST(OptimalInterpolator, SatisfiesNormalEquations) {
  std::mt19937_64 rng(12);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Prior p = random_prior(300 + s, {.n = 10, .k = 4, .h_rows = s % 2 ? 7 : 0});
    NodeList set = testing::random_subset(10, rng);
    if (set.empty()) set.push_back(3);
    const Matrix l = optimal_interpolator(p, set).L;
    const Matrix h = testing::identity_or(p);
    const Matrix c = testing::selection(set, 10);
    const Matrix sigma = p.V_K() * p.lambda.asDiagonal() * p.V_K().transpose();
    const Matrix lhs =
        l * c * (sigma + Matrix(p.lambda_w.asDiagonal())) * c.transpose();
    const Matrix rhs = h * sigma * c.transpose();
    EXPECT_LE((lhs - rhs).norm(), 1e-8 * rhs.norm());
    EXPECT_LE((l - testing::reference_interpolator(p, set)).norm(), 1e-8 * l.norm());
  }
}

TEST(OptimalInterpolator, Errors) {
  const Prior p = random_prior(1, {.n = 6, .k = 2});
  EXPECT_THROW(optimal_interpolator(p, NodeList{}), ParameterError);
  EXPECT_THROW(optimal_interpolator(p, NodeList{1, 1}), ParameterError);
  EXPECT_THROW(optimal_interpolator(p, NodeList{6}), ParameterError);
}

TEST(OptimalInterpolator, FlagsIllConditioning) {
  const SpectralBasis b = select_band(spectral_basis(gen_random_weighted(6, 2)), 2);
  const Prior good = make_prior(b, Vector::Ones(2), Vector::Ones(6));
  EXPECT_FALSE(optimal_interpolator(good, NodeList{0, 1}).ill_conditioned);
  const Prior bad = make_prior(b, Vector::Ones(2), Vector::Constant(6, 1e-14));
  EXPECT_TRUE(optimal_interpolator(bad, NodeList{0}).ill_conditioned);
}

TEST(Interpolate, LinearAndChecked) {
  const Prior p = random_prior(4, {.n = 7, .k = 3});
  const Interpolator interp = optimal_interpolator(p, NodeList{0, 3, 5});
  EXPECT_EQ(interpolate(interp, Vector::Zero(3)), Vector::Zero(7));
  EXPECT_THROW(interpolate(interp, Vector::Zero(2)), ParameterError);
}

TEST(Interpolate, MonteCarloMseMatches) {
  const Prior p = random_prior(44, {.n = 10, .k = 3});
  const NodeList set = {0, 2, 7, 9};
  const Interpolator interp = optimal_interpolator(p, set);
  double acc = 0.0;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    const SignalDraw d = draw_signal(p, sub_seed(99, t));
    acc += (d.x - interpolate(interp, restrict_to(d.y, set))).squaredNorm();
  }
  EXPECT_NEAR(acc / draws, mse(p, set), 0.05 * mse(p, set));
}

}  // namespace
}  // namespace gsamp
