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

// gsamp: command-line front end.
//
// Exit codes: 0 success, 2 bad arguments or config, 3 an exhaustive oracle
// would exceed its cap, 1 anything else.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "gsamp/gsamp.hpp"

namespace {

using namespace gsamp;

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    const auto parent = std::filesystem::path(out).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    write_text_file(out, text);
  }
}

// Options shared by the commands that need a graph and a prior.
struct PriorArgs {
  std::string graph_path;
  std::string prior_path;
  Index bandwidth = 5;
  double sigma_x2 = 1.0;
  double sigma_w2 = 1e-2;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph_path, "graph JSON from 'generate'")
        ->required();
    app->add_option("--prior", prior_path,
                    "prior JSON {lambda, lambda_w, H, K}; overrides the "
                    "homoscedastic options below");
    app->add_option("--bandwidth,-k", bandwidth, "|K|, leading frequencies");
    app->add_option("--sigma-x2", sigma_x2, "signal variance per frequency");
    app->add_option("--sigma-w2", sigma_w2, "noise variance per node");
  }

  Prior load() const {
    const Graph g = graph_from_json(read_json_file(graph_path));
    const SpectralBasis full = spectral_basis(g);
    if (!prior_path.empty())
      return prior_from_json(read_json_file(prior_path), full);
    require(bandwidth >= 1 && bandwidth <= g.n,
            "--bandwidth must lie in [1, n]");
    return homeoscedastic_prior(select_band(full, bandwidth), sigma_x2,
                                sigma_w2);
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Graph signal sampling: bounds, greedy selection, alpha and "
               "subsampled kernel PCA"};
  app.set_version_flag("--version", std::string(kVersion));
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema,
               "print the experiment config JSON schema and exit");
  app.require_subcommand(0, 1);

  std::string out;
  std::uint64_t seed = 1;

  // generate
  auto* gen = app.add_subcommand("generate", "generate a random graph");
  std::string model = "er";
  Index n = 20;
  double p = 0.2;
  gen->add_option("--model", model, "er | pa | rw");
  gen->add_option("--n", n, "number of nodes");
  gen->add_option("--p", p, "edge probability (er)");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", out, "output JSON path (default stdout)");

  // sample
  auto* smp = app.add_subcommand("sample", "select a sampling set");
  PriorArgs sample_prior;
  sample_prior.attach(smp);
  std::string sampler = "greedy";
  Index budget = 5;
  smp->add_option("--sampler", sampler,
                  "greedy | greedy-logdet | uniform | leverage | "
                  "rank_leverage | exhaustive");
  smp->add_option("--budget,-l", budget, "number of samples");
  smp->add_option("--seed", seed, "random seed for randomized samplers");
  smp->add_option("--out", out, "output JSON path (default stdout)");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "universal MSE bound curve");
  PriorArgs bounds_prior;
  bounds_prior.attach(bnd);
  bnd->add_option("--out", out, "output CSV path (default stdout)");

  // alpha
  auto* alp = app.add_subcommand("alpha", "alpha-supermodularity estimate");
  PriorArgs alpha_prior;
  alpha_prior.attach(alp);
  Index node_cap = kDefaultAlphaNodeCap;
  alp->add_option("--node-cap", node_cap, "largest n for exact enumeration");
  alp->add_option("--out", out, "output JSON path (default stdout)");

  // experiment run | summarize
  auto* exp = app.add_subcommand("experiment", "run or summarize experiments");
  exp->require_subcommand(1);
  auto* exp_run = exp->add_subcommand("run", "run an experiment config");
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  exp_run->add_option("--config", config_path, "config JSON")->required();
  exp_run->add_option("--out", out, "output directory (default: out_dir)");
  exp_run->add_option("--seed", seed_override, "override the config seed");
  exp_run->add_option("--jobs,-j", jobs, "worker threads");
  auto* exp_sum = exp->add_subcommand("summarize", "summarize a results CSV");
  std::string table_path;
  exp_sum->add_option("--in", table_path, "results.csv from 'experiment run'")
      ->required();
  exp_sum->add_option("--out", out, "output JSON path (default stdout)");

  // kpca train | project
  auto* kp = app.add_subcommand("kpca", "subsampled kernel PCA");
  kp->require_subcommand(1);
  auto* kp_train = kp->add_subcommand("train", "build a reduced projector");
  std::string data_path;
  Index components = 4;
  int degree = 2;
  double kpca_sigma = 1.0;
  Index kpca_budget = 8;
  kp_train->add_option("--data", data_path, "training CSV, one row per point")
      ->required();
  kp_train->add_option("--components,-k", components, "retained components");
  kp_train->add_option("--degree,-d", degree, "polynomial kernel degree");
  kp_train->add_option("--sigma-w2", kpca_sigma, "regularizer");
  kp_train->add_option("--budget,-l", kpca_budget, "kernel evaluations");
  kp_train->add_option("--out", out, "projector JSON (default stdout)");
  auto* kp_proj = kp->add_subcommand("project", "project new points");
  std::string projector_path;
  std::string points_path;
  kp_proj->add_option("--projector", projector_path, "projector JSON")
      ->required();
  kp_proj->add_option("--data", data_path, "training CSV")->required();
  kp_proj->add_option("--points", points_path, "CSV of points to project")
      ->required();
  kp_proj->add_option("--out", out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (print_schema) {
    std::cout << config_schema();
    return 0;
  }

  if (*gen) {
    const Graph g = generate(parse_graph_model(model), n, seed, p);
    emit(out, graph_to_json(g).dump(2) + "\n");
  } else if (*smp) {
    const Prior prior = sample_prior.load();
    require(budget >= 1 && budget <= prior.n(), "--budget must lie in [1, n]");
    Json result;
    if (sampler == "greedy") {
      result = greedy_result_to_json(greedy_mse(prior, budget));
    } else if (sampler == "greedy-logdet") {
      result = greedy_result_to_json(
          greedy_generic(logdet_objective(prior), prior.n(), budget));
    } else if (sampler == "exhaustive") {
      const ExhaustiveResult ex = exhaustive_optimal(prior, budget);
      result = {{"indices", ex.set.indices}, {"evaluated", ex.evaluated}};
    } else if (sampler == "uniform") {
      result = {{"indices", sample_uniform(prior.n(), budget, seed).indices}};
    } else if (sampler == "leverage") {
      result = {{"indices", sample_leverage(prior, budget, seed).indices}};
    } else if (sampler == "rank_leverage") {
      result = {{"indices", rank_leverage(prior, budget).indices}};
    } else {
      throw ParameterError("unknown sampler \"" + sampler + "\"");
    }
    result["sampler"] = sampler;
    result["mse"] = mse(prior, result.at("indices").get<NodeList>());
    emit(out, result.dump(2) + "\n");
  } else if (*bnd) {
    const Prior prior = bounds_prior.load();
    const BoundsReport r = bounds_report(prior);
    Matrix curve(r.n() + 1, 4);
    for (Index m = 0; m <= r.n(); ++m)
      curve.row(m) << static_cast<double>(m), r.lower(m), r.upper, r.L(m);
    emit(out, matrix_to_csv(curve, {"m", "lower", "upper", "L_m"}));
  } else if (*alp) {
    const Prior prior = alpha_prior.load();
    if (prior.n() > node_cap) detail::check_alpha_cap(prior.n(), node_cap);
    emit(out, alpha_estimate_to_json(estimate_alpha(prior, node_cap)).dump(2) +
                  "\n");
  } else if (*exp_run) {
    ExperimentConfig cfg = parse_config(read_json_file(config_path));
    if (seed_override) cfg.seed = *seed_override;
    if (!out.empty()) cfg.out_dir = out;
    const ResultTable table = run_experiment(cfg, jobs);
    write_outputs(table, cfg.out_dir);
    std::cerr << cfg.experiment << ": " << table.rows.size() << " rows -> "
              << cfg.out_dir << "\n";
  } else if (*exp_sum) {
    const auto meta_path =
        std::filesystem::path(table_path).parent_path() / "metadata.json";
    std::optional<Json> meta;
    if (std::filesystem::exists(meta_path))
      meta = read_json_file(meta_path.string());
    emit(out, summarize(read_table_csv(table_path, meta)).dump(2) + "\n");
  } else if (*kp_train) {
    const GramModel model = kpca_basis(
        gram_matrix(read_matrix_csv(data_path), PolyKernel{degree, 1.0}),
        components);
    require(kpca_budget >= 1 && kpca_budget <= model.n(),
            "--budget must lie in [1, n]");
    emit(out, projector_to_json(
                  build_reduced_projector(model, kpca_budget, kpca_sigma))
                      .dump(2) +
                  "\n");
  } else if (*kp_proj) {
    const ReducedProjector proj =
        projector_from_json(read_json_file(projector_path));
    const Matrix data = read_matrix_csv(data_path);
    const Matrix points = read_matrix_csv(points_path);
    for (Index i : proj.S.indices)
      require(i >= 0 && i < data.rows(),
              "projector index out of range for --data");
    Matrix result(points.rows(), proj.k);
    for (Index i = 0; i < points.rows(); ++i)
      result.row(i) =
          sub_project(proj, data, points.row(i).transpose()).transpose();
    std::vector<std::string> header;
    for (Index c = 0; c < proj.k; ++c)
      header.push_back("pc" + std::to_string(c + 1));
    emit(out, matrix_to_csv(result, header));
  } else {
    std::cout << app.help();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gsamp::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const gsamp::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gsamp::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
