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

#include <filesystem>

#include <gtest/gtest.h>

#include "gsamp/io.hpp"
#include "test_util.hpp"

namespace gsamp {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gsamp_io_" + name)).string();
}

TEST(GraphJson, RoundTripAndUpperTriangleEdges) {
  const Graph g = gen_random_weighted(7, 3);
  const Json j = graph_to_json(g);
  EXPECT_EQ(j.at("n"), 7);
  EXPECT_EQ(j.at("model_tag"), "random_weighted");
  EXPECT_EQ(j.at("edges").size(), 21u);
  for (const Json& e : j.at("edges")) EXPECT_LT(e[0].get<Index>(), e[1].get<Index>());
  const Graph back = graph_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.adjacency, g.adjacency);
  EXPECT_EQ(back.seed, g.seed);
}

TEST(GraphJson, RejectsMalformedEdges) {
  Json j = {{"n", 3}, {"edges", {{0, 3, 1.0}}}};
  EXPECT_THROW(graph_from_json(j), ParameterError);
  j["edges"] = {{0, 1}};
  EXPECT_THROW(graph_from_json(j), ParameterError);
}

TEST(PriorJson, RoundTripIdentityAndMatrixH) {
  const Graph g = gen_erdos_renyi(10, 0.3, 2);
  const SpectralBasis full = spectral_basis(g);
  for (Index rows : {0, 6}) {
    std::optional<Matrix> h;
    if (rows) h = gaussian_matrix(rows, 10, 4);
    const Prior p = make_prior(with_band(full, {0, 2, 5}),
                               Vector::LinSpaced(3, 1, 2),
                               uniform_vector(10, 0.1, 0.2, 5), h);
    const Json j = prior_to_json(p);
    if (!rows) EXPECT_EQ(j.at("H"), "identity");
    const Prior back = prior_from_json(Json::parse(j.dump()), full);
    EXPECT_EQ(back.basis->K, (NodeList{0, 2, 5}));
    EXPECT_EQ(back.lambda, p.lambda);
    EXPECT_EQ(back.lambda_w, p.lambda_w);
    EXPECT_EQ(back.H.has_value(), p.H.has_value());
    if (p.H) EXPECT_EQ(*back.H, *p.H);
    EXPECT_DOUBLE_EQ(mse(back, NodeList{1, 3}), mse(p, NodeList{1, 3}));
  }
}

TEST(PriorJson, RejectsUnknownHString) {
  const SpectralBasis full = spectral_basis(gen_random_weighted(4, 1));
  const Json j = {{"lambda", {1.0}}, {"lambda_w", {1, 1, 1, 1}}, {"H", "eye"}, {"K", {0}}};
  EXPECT_THROW(prior_from_json(j, full), ParameterError);
}

TEST(GreedyResultJson, RoundTrip) {
  const Prior p = testing::random_prior(3, {.n = 10, .k = 3});
  const GreedyResult g = greedy_mse(p, 4);
  const Json j = greedy_result_to_json(g);
  EXPECT_TRUE(j.contains("indices") && j.contains("trajectory") && j.contains("gains"));
  const GreedyResult back = greedy_result_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.set.indices, g.set.indices);
  EXPECT_EQ(back.objective_trajectory, g.objective_trajectory);
  EXPECT_EQ(back.per_step_gain, g.per_step_gain);
}

TEST(AlphaJson, CarriesAllFields) {
  const Prior p = testing::random_prior(3, {.n = 6, .k = 2, .heteroscedastic = false});
  const Json j = alpha_estimate_to_json(estimate_alpha(p));
  for (const char* key : {"alpha_exact", "alpha_lb_general", "alpha_lb_homeo", "mu_min",
                          "mu_max", "kappa2_W", "gamma", "triples_evaluated",
                          "triples_skipped", "witness"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j.at("witness").contains("u"));
  EXPECT_FALSE(j.at("alpha_exact").is_null());
}

TEST(ProjectorJson, RoundTripRowMajor) {
  const Matrix train = two_circles(40, 2);
  const GramModel m = kpca_basis(gram_matrix(train, PolyKernel{3, 1.0}), 3);
  const ReducedProjector proj = build_reduced_projector(m, 5, 0.5);
  const Json j = projector_to_json(proj);
  EXPECT_EQ(j.at("kernel").at("type"), "poly");
  EXPECT_EQ(j.at("kernel").at("d"), 3);
  EXPECT_EQ(j.at("P").size(), 15u);
  EXPECT_DOUBLE_EQ(j.at("P")[1].get<double>(), proj.P(0, 1));
  const ReducedProjector back = projector_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.P, proj.P);
  EXPECT_EQ(back.S.indices, proj.S.indices);
  const Vector y = (Vector(2) << 0.2, 1.1).finished();
  EXPECT_EQ(sub_project(back, train, y), sub_project(proj, train, y));

  Json bad = j;
  bad["P"].erase(0);
  EXPECT_THROW(projector_from_json(bad), ParameterError);
}

TEST(MatrixCsv, RoundTripWithHeaderAndFullPrecision) {
  Matrix m(3, 2);
  m << 0.1, 1.0 / 3.0, -2e-300, 7.0, 1e300, -0.0;
  const std::string path = temp_path("matrix.csv");
  write_text_file(path, matrix_to_csv(m, {"x", "y"}));
  EXPECT_EQ(read_matrix_csv(path), m);
  write_text_file(path, matrix_to_csv(m));
  EXPECT_EQ(read_matrix_csv(path), m);
  std::filesystem::remove(path);
}

TEST(MatrixCsv, RejectsRaggedAndMissing) {
  const std::string path = temp_path("ragged.csv");
  write_text_file(path, "1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(path), ParameterError);
  write_text_file(path, "a,b\nc,d\n");
  EXPECT_THROW(read_matrix_csv(path), ParameterError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_matrix_csv(path), ParameterError);
  EXPECT_THROW(read_json_file(path), ParameterError);
}

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace gsamp
