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

// Experiment runner: JSON configs in, long-format result tables out.
//
// Every experiment is a sweep over settings (graph model x noise level) and
// independent trials. A trial derives all of its randomness from
// sub_seed(seed, {model, noise index, trial, purpose}), so tables do not
// depend on the number of worker threads.

#ifndef GSAMP_EXPERIMENT_HPP_
#define GSAMP_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gsamp/alpha.hpp"
#include "gsamp/bounds.hpp"
#include "gsamp/common.hpp"
#include "gsamp/graph.hpp"
#include "gsamp/interp.hpp"
#include "gsamp/io.hpp"
#include "gsamp/kpca.hpp"
#include "gsamp/rng.hpp"
#include "gsamp/samplers.hpp"
#include "gsamp/signals.hpp"
#include "gsamp/spectral.hpp"

namespace gsamp {

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "fig1-bounds",   "fig5-greedy-vs-bound", "fig6-alpha", "fig7-8-subopt",
      "fig9-logdet",   "fig10-setsize",        "kpca-demo"};
  return ids;
}

struct KpcaSettings {
  Index n_train = 200;
  Index n_test = 100;
  Index components = 4;
  int degree = 2;
  double sigma_w2 = 1.0;
  std::vector<Index> budgets = {4, 8, 16};
};

struct ExperimentConfig {
  std::string experiment;
  std::vector<std::string> models = {"er"};
  Index n = 20;
  double edge_probability = 0.2;
  Index bandwidth = 5;
  double sigma_x2 = 1.0;
  std::vector<double> sigma_w2 = {1e-2};
  // When set, lambda_w is drawn per trial from U[lo, hi] instead.
  std::optional<std::pair<double, double>> lambda_w_range;
  // Rows of a random Gaussian H; 0 means H = I.
  Index h_rows = 0;
  Index trials = 1;
  std::uint64_t seed = 1;
  // Greedy budget (fig5/7-8/9/10) or largest enumerated size (fig1).
  std::optional<Index> budget;
  std::vector<std::string> samplers = {"greedy"};
  double reduction = 0.9;  // fig10 target: MSE <= (1 - reduction) MSE({})
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  Index alpha_node_cap = kDefaultAlphaNodeCap;
  KpcaSettings kpca;
  std::string out_dir = "results";
};

// ---- Config parsing ------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& known,
                                const std::string& where) {
  require(j.is_object(), where + " must be a JSON object");
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      throw ParameterError(where + ": unknown key \"" + item.key() + "\"");
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("config key \"") + key + "\": " + e.what());
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  detail::reject_unknown_keys(
      j,
      {"experiment", "graph", "bandwidth", "prior", "trials", "seed", "budget",
       "samplers", "reduction", "enumeration_cap", "alpha_node_cap", "kpca",
       "out_dir"},
      "config");
  ExperimentConfig c;
  require(j.contains("experiment"), "config: missing \"experiment\"");
  c.experiment = detail::get_or<std::string>(j, "experiment", "");
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), c.experiment) == ids.end())
    throw ParameterError("config: unknown experiment \"" + c.experiment + "\"");

  if (j.contains("graph")) {
    const Json& g = j.at("graph");
    detail::reject_unknown_keys(g, {"models", "n", "p"}, "config.graph");
    c.models = detail::get_or(g, "models", c.models);
    c.n = detail::get_or(g, "n", c.n);
    c.edge_probability = detail::get_or(g, "p", c.edge_probability);
  }
  c.bandwidth = detail::get_or(j, "bandwidth", c.bandwidth);
  if (j.contains("prior")) {
    const Json& p = j.at("prior");
    detail::reject_unknown_keys(
        p, {"sigma_x2", "sigma_w2", "lambda_w_range", "h_rows"}, "config.prior");
    c.sigma_x2 = detail::get_or(p, "sigma_x2", c.sigma_x2);
    if (p.contains("sigma_w2")) {
      const Json& s = p.at("sigma_w2");
      c.sigma_w2 = s.is_array() ? detail::get_or(p, "sigma_w2", c.sigma_w2)
                                : std::vector<double>{
                                      detail::get_or(p, "sigma_w2", 0.0)};
    }
    if (p.contains("lambda_w_range")) {
      const auto r = detail::get_or(p, "lambda_w_range", std::vector<double>{});
      require(r.size() == 2 && r[0] > 0.0 && r[0] <= r[1],
              "config.prior.lambda_w_range must be [lo, hi] with 0 < lo <= hi");
      c.lambda_w_range = std::make_pair(r[0], r[1]);
    }
    c.h_rows = detail::get_or(p, "h_rows", c.h_rows);
  }
  c.trials = detail::get_or(j, "trials", c.trials);
  c.seed = detail::get_or(j, "seed", c.seed);
  if (j.contains("budget")) c.budget = detail::get_or<Index>(j, "budget", 0);
  c.samplers = detail::get_or(j, "samplers", c.samplers);
  c.reduction = detail::get_or(j, "reduction", c.reduction);
  c.enumeration_cap = detail::get_or(j, "enumeration_cap", c.enumeration_cap);
  c.alpha_node_cap = detail::get_or(j, "alpha_node_cap", c.alpha_node_cap);
  if (j.contains("kpca")) {
    const Json& k = j.at("kpca");
    detail::reject_unknown_keys(
        k, {"n_train", "n_test", "components", "degree", "sigma_w2", "budgets"},
        "config.kpca");
    c.kpca.n_train = detail::get_or(k, "n_train", c.kpca.n_train);
    c.kpca.n_test = detail::get_or(k, "n_test", c.kpca.n_test);
    c.kpca.components = detail::get_or(k, "components", c.kpca.components);
    c.kpca.degree = detail::get_or(k, "degree", c.kpca.degree);
    c.kpca.sigma_w2 = detail::get_or(k, "sigma_w2", c.kpca.sigma_w2);
    c.kpca.budgets = detail::get_or(k, "budgets", c.kpca.budgets);
  }
  c.out_dir = detail::get_or(j, "out_dir", c.out_dir);

  require(c.trials >= 1, "config: trials must be >= 1");
  require(!c.models.empty(), "config.graph.models must not be empty");
  for (const auto& m : c.models) parse_graph_model(m);
  require(c.n >= 1, "config.graph.n must be >= 1");
  require(c.edge_probability >= 0.0 && c.edge_probability <= 1.0,
          "config.graph.p must lie in [0, 1]");
  require(c.bandwidth >= 1 && c.bandwidth <= c.n,
          "config: bandwidth must lie in [1, n]");
  require(c.sigma_x2 > 0.0, "config.prior.sigma_x2 must be positive");
  require(!c.sigma_w2.empty(), "config.prior.sigma_w2 must not be empty");
  for (double s : c.sigma_w2)
    require(s > 0.0, "config.prior.sigma_w2 entries must be positive");
  require(c.h_rows >= 0, "config.prior.h_rows must be >= 0");
  if (c.budget) require(*c.budget >= 0 && *c.budget <= c.n,
                        "config: budget must lie in [0, n]");
  require(c.reduction > 0.0 && c.reduction < 1.0,
          "config: reduction must lie in (0, 1)");
  static const std::set<std::string> known_samplers = {
      "greedy", "uniform", "leverage", "rank_leverage"};
  for (const auto& s : c.samplers)
    if (!known_samplers.count(s))
      throw ParameterError("config: unknown sampler \"" + s + "\"");
  require(c.kpca.n_train >= 1 && c.kpca.n_test >= 1,
          "config.kpca: point counts must be >= 1");
  require(c.kpca.components >= 1 && c.kpca.components <= c.kpca.n_train,
          "config.kpca.components must lie in [1, n_train]");
  require(c.kpca.degree >= 1, "config.kpca.degree must be >= 1");
  require(c.kpca.sigma_w2 > 0.0, "config.kpca.sigma_w2 must be positive");
  for (Index b : c.kpca.budgets)
    require(b >= 1 && b <= c.kpca.n_train,
            "config.kpca.budgets must lie in [1, n_train]");
  return c;
}

inline Json config_to_json(const ExperimentConfig& c) {
  Json prior = {{"sigma_x2", c.sigma_x2}, {"sigma_w2", c.sigma_w2},
                {"h_rows", c.h_rows}};
  if (c.lambda_w_range)
    prior["lambda_w_range"] = {c.lambda_w_range->first,
                               c.lambda_w_range->second};
  Json j = {{"experiment", c.experiment},
            {"graph", {{"models", c.models}, {"n", c.n},
                       {"p", c.edge_probability}}},
            {"bandwidth", c.bandwidth},
            {"prior", std::move(prior)},
            {"trials", c.trials},
            {"seed", c.seed},
            {"samplers", c.samplers},
            {"reduction", c.reduction},
            {"enumeration_cap", c.enumeration_cap},
            {"alpha_node_cap", c.alpha_node_cap},
            {"kpca", {{"n_train", c.kpca.n_train},
                      {"n_test", c.kpca.n_test},
                      {"components", c.kpca.components},
                      {"degree", c.kpca.degree},
                      {"sigma_w2", c.kpca.sigma_w2},
                      {"budgets", c.kpca.budgets}}},
            {"out_dir", c.out_dir}};
  if (c.budget) j["budget"] = *c.budget;
  return j;
}

// FNV-1a over the canonical config JSON (sorted keys), without out_dir.
inline std::string config_hash(const ExperimentConfig& c) {
  Json j = config_to_json(c);
  j.erase("out_dir");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline const char* config_schema() {
  return R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "gsamp experiment config",
  "type": "object",
  "required": ["experiment"],
  "additionalProperties": false,
  "properties": {
    "experiment": {"enum": ["fig1-bounds", "fig5-greedy-vs-bound", "fig6-alpha",
                            "fig7-8-subopt", "fig9-logdet", "fig10-setsize",
                            "kpca-demo"]},
    "graph": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "models": {"type": "array", "items": {"enum": ["er", "pa", "rw",
                   "erdos_renyi", "preferential_attachment", "random_weighted"]},
                   "default": ["er"]},
        "n": {"type": "integer", "minimum": 1, "default": 20},
        "p": {"type": "number", "minimum": 0, "maximum": 1, "default": 0.2,
              "description": "Erdos-Renyi edge probability"}
      }
    },
    "bandwidth": {"type": "integer", "minimum": 1, "default": 5,
                  "description": "|K|, leading frequencies by |eigenvalue|"},
    "prior": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "sigma_x2": {"type": "number", "exclusiveMinimum": 0, "default": 1},
        "sigma_w2": {"oneOf": [{"type": "number", "exclusiveMinimum": 0},
                               {"type": "array", "items": {"type": "number",
                                "exclusiveMinimum": 0}}],
                     "default": 0.01,
                     "description": "noise variance; an array sweeps settings"},
        "lambda_w_range": {"type": "array", "items": {"type": "number"},
                           "minItems": 2, "maxItems": 2,
                           "description": "per-node noise variance ~ U[lo, hi]"},
        "h_rows": {"type": "integer", "minimum": 0, "default": 0,
                   "description": "rows of a Gaussian H; 0 selects H = I"}
      }
    },
    "trials": {"type": "integer", "minimum": 1, "default": 1},
    "seed": {"type": "integer", "minimum": 0, "default": 1},
    "budget": {"type": "integer", "minimum": 0,
               "description": "greedy budget, or largest enumerated size"},
    "samplers": {"type": "array", "items": {"enum": ["greedy", "uniform",
                 "leverage", "rank_leverage"]}, "default": ["greedy"]},
    "reduction": {"type": "number", "exclusiveMinimum": 0,
                  "exclusiveMaximum": 1, "default": 0.9},
    "enumeration_cap": {"type": "integer", "minimum": 1, "default": 2000000},
    "alpha_node_cap": {"type": "integer", "minimum": 1, "default": 12},
    "kpca": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "n_train": {"type": "integer", "minimum": 1, "default": 200},
        "n_test": {"type": "integer", "minimum": 1, "default": 100},
        "components": {"type": "integer", "minimum": 1, "default": 4},
        "degree": {"type": "integer", "minimum": 1, "default": 2},
        "sigma_w2": {"type": "number", "exclusiveMinimum": 0, "default": 1},
        "budgets": {"type": "array", "items": {"type": "integer",
                    "minimum": 1}, "default": [4, 8, 16]}
      }
    },
    "out_dir": {"type": "string", "default": "results"}
  }
}
)";
}

// ---- Result tables -------------------------------------------------------

struct ResultRow {
  std::string setting;
  Index trial = 0;
  std::string sampler;
  Index set_size = 0;
  std::string metric;
  double value = 0.0;
};

struct ResultTable {
  std::string config_hash;
  std::string experiment;
  std::string version = kVersion;
  Index bandwidth = 0;
  std::vector<ResultRow> rows;
};

inline const char* kResultCsvHeader =
    "config_hash,experiment,setting,trial,sampler,set_size,metric,value";

inline std::string table_to_csv(const ResultTable& t) {
  std::string out = kResultCsvHeader;
  out += '\n';
  for (const ResultRow& r : t.rows) {
    out += t.config_hash + ',' + t.experiment + ',' + r.setting + ',' +
           std::to_string(r.trial) + ',' + r.sampler + ',' +
           std::to_string(r.set_size) + ',' + r.metric + ',' +
           format_double(r.value) + '\n';
  }
  return out;
}

inline Json table_metadata(const ResultTable& t) {
  return {{"config_hash", t.config_hash},
          {"experiment", t.experiment},
          {"version", t.version},
          {"bandwidth", t.bandwidth},
          {"rows", t.rows.size()}};
}

// Reads a table written by table_to_csv; metadata (bandwidth, version)
// comes from the optional sidecar JSON.
inline ResultTable read_table_csv(const std::string& path,
                                  const std::optional<Json>& metadata = {}) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParameterError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kResultCsvHeader, path + ": unexpected header");
  ResultTable t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() == 8,
            path + ":" + std::to_string(lineno) + ": expected 8 fields");
    if (t.rows.empty()) {
      t.config_hash = cells[0];
      t.experiment = cells[1];
    }
    require(cells[0] == t.config_hash,
            path + ":" + std::to_string(lineno) + ": config hash mismatch");
    ResultRow r;
    r.setting = cells[2];
    r.sampler = cells[4];
    r.metric = cells[6];
    try {
      r.trial = std::stoll(cells[3]);
      r.set_size = std::stoll(cells[5]);
      r.value = std::stod(cells[7]);
    } catch (const std::exception&) {
      throw ParameterError(path + ":" + std::to_string(lineno) +
                           ": malformed number");
    }
    t.rows.push_back(std::move(r));
  }
  if (metadata) {
    t.bandwidth = metadata->value("bandwidth", Index{0});
    t.version = metadata->value("version", std::string(kVersion));
  }
  return t;
}

// ---- Summaries -----------------------------------------------------------

// Linear-interpolation quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  require(!sorted.empty(), "quantile: empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline constexpr double kZeroSuboptimality = 1e-9;

// Per (setting, sampler, set_size, metric): count, mean, median, std (population),
// min, max. Relative-suboptimality metrics add the fraction at zero and a
// 20-bin histogram on [0, 1]; set-size metrics add quantiles and the
// fraction equal to the bandwidth.
inline Json summarize(const ResultTable& t) {
  if (t.rows.empty()) throw ParameterError("summarize: empty table");
  std::map<std::tuple<std::string, std::string, Index, std::string>,
           std::vector<double>>
      groups;
  for (const ResultRow& r : t.rows)
    groups[{r.setting, r.sampler, r.set_size, r.metric}].push_back(r.value);

  Json out = table_metadata(t);
  Json stats = Json::array();
  for (auto& [key, values] : groups) {
    const auto& [setting, sampler, set_size, metric] = key;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    Json s = {{"setting", setting},
              {"sampler", sampler},
              {"set_size", set_size},
              {"metric", metric},
              {"count", values.size()},
              {"mean", mean},
              {"median", quantile_sorted(sorted, 0.5)},
              {"std", std::sqrt(var)},
              {"min", sorted.front()},
              {"max", sorted.back()}};
    if (metric == "rel_subopt") {
      std::size_t zero = 0;
      std::vector<std::size_t> hist(20, 0);
      for (double v : values) {
        if (v <= kZeroSuboptimality) ++zero;
        const auto bin = static_cast<std::size_t>(
            std::clamp(v, 0.0, 1.0) * 20.0);
        ++hist[std::min<std::size_t>(bin, 19)];
      }
      s["fraction_zero"] =
          static_cast<double>(zero) / static_cast<double>(values.size());
      s["histogram"] = {{"edges_lo", 0.0}, {"edges_hi", 1.0},
                        {"counts", hist}};
    }
    if (metric == "size_to_target") {
      s["quantiles"] = {{"q10", quantile_sorted(sorted, 0.10)},
                        {"q25", quantile_sorted(sorted, 0.25)},
                        {"q50", quantile_sorted(sorted, 0.50)},
                        {"q75", quantile_sorted(sorted, 0.75)},
                        {"q90", quantile_sorted(sorted, 0.90)}};
      if (t.bandwidth > 0) {
        std::size_t eq = 0;
        for (double v : values)
          if (v == static_cast<double>(t.bandwidth)) ++eq;
        s["fraction_equal_bandwidth"] =
            static_cast<double>(eq) / static_cast<double>(values.size());
      }
    }
    stats.push_back(std::move(s));
  }
  out["stats"] = std::move(stats);
  return out;
}

// ---- Instances -----------------------------------------------------------

struct Setting {
  GraphModel model = GraphModel::kErdosRenyi;
  std::size_t noise_index = 0;
  double sigma_w2 = 0.0;
  std::string label;
};

// Short %g form for labels.
inline std::string label_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::vector<Setting> expand_settings(const ExperimentConfig& c) {
  std::vector<Setting> out;
  for (const std::string& m : c.models) {
    for (std::size_t s = 0; s < c.sigma_w2.size(); ++s) {
      Setting st;
      st.model = parse_graph_model(m);
      st.noise_index = s;
      st.sigma_w2 = c.sigma_w2[s];
      std::string model_name = graph_model_name(st.model);
      st.label = model_name + "/" +
                 (c.lambda_w_range
                      ? "lambda_w=U[" + label_number(c.lambda_w_range->first) +
                            ";" + label_number(c.lambda_w_range->second) + "]"
                      : "sigma_w2=" + label_number(st.sigma_w2));
      out.push_back(std::move(st));
    }
  }
  return out;
}

enum SeedPurpose : std::uint64_t {
  kSeedGraph = 1,
  kSeedNoise = 2,
  kSeedObservation = 3,
  kSeedSampler = 4,
  kSeedData = 5,
};

inline std::uint64_t trial_seed(const ExperimentConfig& c, const Setting& s,
                                Index trial, std::uint64_t purpose) {
  return sub_seed(c.seed, {static_cast<std::uint64_t>(s.model),
                           static_cast<std::uint64_t>(s.noise_index),
                           static_cast<std::uint64_t>(trial), purpose});
}

struct Instance {
  Graph graph;
  Prior prior;
};

inline Instance make_instance(const ExperimentConfig& c, const Setting& s,
                              Index trial) {
  Instance inst;
  inst.graph = generate(s.model, c.n, trial_seed(c, s, trial, kSeedGraph),
                        c.edge_probability);
  const SpectralBasis basis =
      select_band(spectral_basis(inst.graph), c.bandwidth);
  const Vector lambda = Vector::Constant(c.bandwidth, c.sigma_x2);
  const Vector lambda_w =
      c.lambda_w_range
          ? uniform_vector(c.n, c.lambda_w_range->first,
                           c.lambda_w_range->second,
                           trial_seed(c, s, trial, kSeedNoise))
          : Vector::Constant(c.n, s.sigma_w2);
  std::optional<Matrix> h;
  if (c.h_rows > 0)
    h = gaussian_matrix(c.h_rows, c.n,
                        trial_seed(c, s, trial, kSeedObservation));
  inst.prior = make_prior(basis, lambda, lambda_w, std::move(h));
  return inst;
}

// ---- Per-experiment trials ----------------------------------------------

namespace detail {

using Rows = std::vector<ResultRow>;

inline void check_sandwich(const BoundsReport& r, Index m, double value) {
  const double lo = r.lower(m);
  if (value < lo * (1.0 - 1e-10) || value > r.upper * (1.0 + 1e-10))
    throw ConsistencyError("bound violated at m = " + std::to_string(m) +
                           ": lower " + format_double(lo) + ", mse " +
                           format_double(value) + ", upper " +
                           format_double(r.upper));
}

// Sampler output of size `budget`, in selection order.
inline SamplingSet run_sampler(const std::string& name, const Prior& prior,
                               Index budget, std::uint64_t seed) {
  if (name == "greedy") return greedy_mse(prior, budget).set;
  if (name == "uniform") return sample_uniform(prior.n(), budget, seed);
  if (name == "leverage") return sample_leverage(prior, budget, seed);
  if (name == "rank_leverage") return rank_leverage(prior, budget);
  throw ParameterError("unknown sampler \"" + name + "\"");
}

inline double alpha_for_guarantee(const AlphaEstimate& a) {
  return a.alpha_lb_homeo ? *a.alpha_lb_homeo : a.alpha_lb_general;
}

inline Rows trial_fig1(const ExperimentConfig& c, const Setting& s, Index t) {
  const Instance inst = make_instance(c, s, t);
  const Prior& p = inst.prior;
  const BoundsReport rep = bounds_report(p);
  const Index top = c.budget.value_or(c.n);
  Rows rows;
  for (Index m = 0; m <= top; ++m) {
    const ExhaustiveResult ex = exhaustive_optimal(p, m, c.enumeration_cap);
    check_sandwich(rep, m, ex.value);
    const SetSizeBound sb = min_set_size_bound(rep, ex.value);
    if (!sb.prefix_size_bound || *sb.prefix_size_bound > m)
      throw ConsistencyError("set-size bound exceeds the optimal size " +
                             std::to_string(m));
    rows.push_back({s.label, t, "exhaustive", m, "mse", ex.value});
    rows.push_back({s.label, t, "bound", m, "lower", rep.lower(m)});
    rows.push_back({s.label, t, "bound", m, "upper", rep.upper});
    rows.push_back({s.label, t, "bound", m, "min_size_for_mse",
                    static_cast<double>(*sb.prefix_size_bound)});
  }
  for (const std::string& name : c.samplers) {
    if (top == 0) break;
    const SamplingSet set =
        run_sampler(name, p, top, trial_seed(c, s, t, kSeedSampler));
    const std::vector<double> traj = prefix_mse(p, set.indices);
    for (Index m = 1; m <= top; ++m) {
      const double v = traj[static_cast<std::size_t>(m - 1)];
      check_sandwich(rep, m, v);
      rows.push_back({s.label, t, name, m, "mse", v});
    }
  }
  return rows;
}

inline Rows trial_fig5(const ExperimentConfig& c, const Setting& s, Index t) {
  const Instance inst = make_instance(c, s, t);
  const Prior& p = inst.prior;
  const BoundsReport rep = bounds_report(p);
  const Index budget = c.budget.value_or(std::min(c.n, 4 * c.bandwidth));
  require(budget >= 1, "fig5-greedy-vs-bound: budget must be >= 1");
  const GreedyResult g = greedy_mse(p, budget);
  Rows rows;
  rows.push_back({s.label, t, "greedy", 0, "mse", rep.upper});
  rows.push_back({s.label, t, "bound", 0, "lower", rep.lower(0)});
  std::size_t violations = 0;
  for (Index j = 1; j <= budget; ++j) {
    const double v = g.objective_trajectory[static_cast<std::size_t>(j - 1)];
    check_sandwich(rep, j, v);
    const SetSizeBound sb = min_set_size_bound(rep, v);
    const double bound_size = sb.prefix_size_bound
                                  ? static_cast<double>(*sb.prefix_size_bound)
                                  : static_cast<double>(p.n() + 1);
    if (bound_size > static_cast<double>(j)) ++violations;
    rows.push_back({s.label, t, "greedy", j, "mse", v});
    rows.push_back({s.label, t, "bound", j, "lower", rep.lower(j)});
    rows.push_back({s.label, t, "bound", j, "min_size_for_mse", bound_size});
    rows.push_back({s.label, t, "bound", j, "crude_size_for_mse",
                    static_cast<double>(std::max<Index>(sb.size_bound, 0))});
  }
  const double terminal = g.objective_trajectory.back();
  rows.push_back({s.label, t, "greedy", budget, "terminal_mse_over_lower",
                  terminal / rep.lower(budget)});
  rows.push_back({s.label, t, "bound", budget, "size_bound_violations",
                  static_cast<double>(violations)});
  return rows;
}

inline Rows trial_fig6(const ExperimentConfig& c, const Setting& s, Index t) {
  const Instance inst = make_instance(c, s, t);
  const AlphaEstimate a = estimate_alpha(inst.prior, c.alpha_node_cap);
  if (!a.alpha_exact && inst.prior.n() > c.alpha_node_cap)
    detail::check_alpha_cap(inst.prior.n(), c.alpha_node_cap);
  Rows rows;
  const Index n = inst.prior.n();
  if (a.alpha_exact)
    rows.push_back({s.label, t, "alpha", n, "alpha_exact", *a.alpha_exact});
  rows.push_back({s.label, t, "alpha", n, "alpha_lb_general",
                  a.alpha_lb_general});
  if (a.alpha_lb_homeo) {
    rows.push_back({s.label, t, "alpha", n, "alpha_lb_homeo",
                    *a.alpha_lb_homeo});
    if (a.alpha_exact)
      rows.push_back({s.label, t, "alpha", n, "lb_below_exact",
                      *a.alpha_lb_homeo <= *a.alpha_exact + 1e-9 ? 1.0 : 0.0});
  }
  rows.push_back({s.label, t, "alpha", n, "triples_skipped",
                  static_cast<double>(a.triples_skipped)});
  return rows;
}

inline Rows trial_fig78(const ExperimentConfig& c, const Setting& s, Index t) {
  const Instance inst = make_instance(c, s, t);
  const Prior& p = inst.prior;
  const Index budget = c.budget.value_or(c.bandwidth);
  require(budget >= 1, "fig7-8-subopt: budget must be >= 1");
  const double f_empty = mse(p, NodeList{});
  const ExhaustiveResult ex = exhaustive_optimal(p, budget, c.enumeration_cap);
  // Only the closed-form bounds are needed here, never the enumeration.
  const AlphaEstimate a = estimate_alpha(p, 0);
  const double alpha = std::min(alpha_for_guarantee(a),
                                static_cast<double>(p.k()));
  const GreedyGuarantee gg = greedy_guarantee(alpha, p.k(), budget);
  Rows rows;
  rows.push_back({s.label, t, "exhaustive", budget, "mse", ex.value});
  rows.push_back({s.label, t, "bound", budget, "alpha_lb", alpha});
  rows.push_back({s.label, t, "bound", budget, "guarantee_exact", gg.exact});
  rows.push_back({s.label, t, "bound", budget, "guarantee_exp", gg.exp_bound});
  for (const std::string& name : c.samplers) {
    const SamplingSet set =
        run_sampler(name, p, budget, trial_seed(c, s, t, kSeedSampler));
    const double v = mse(p, set);
    const double rel = relative_suboptimality(v, ex.value, f_empty);
    rows.push_back({s.label, t, name, budget, "mse", v});
    rows.push_back({s.label, t, name, budget, "rel_subopt", rel});
  }
  return rows;
}

inline Rows trial_fig9(const ExperimentConfig& c, const Setting& s, Index t) {
  const Instance inst = make_instance(c, s, t);
  const Prior& p = inst.prior;
  const Index budget = c.budget.value_or(c.bandwidth);
  require(budget >= 1, "fig9-logdet: budget must be >= 1");
  const double f_empty = mse(p, NodeList{});
  const ExhaustiveResult ex = exhaustive_optimal(p, budget, c.enumeration_cap);
  const GreedyResult g_mse = greedy_mse(p, budget);
  const GreedyResult g_ld = greedy_generic(logdet_objective(p), p.n(), budget);
  Rows rows;
  rows.push_back({s.label, t, "exhaustive", budget, "mse", ex.value});
  for (const auto& [name, res] :
       {std::pair<const char*, const GreedyResult*>{"greedy_mse", &g_mse},
        {"greedy_logdet", &g_ld}}) {
    const double v = mse(p, res->set);
    rows.push_back({s.label, t, name, budget, "mse", v});
    rows.push_back({s.label, t, name, budget, "rel_subopt",
                    relative_suboptimality(v, ex.value, f_empty)});
  }
  return rows;
}

inline Rows trial_fig10(const ExperimentConfig& c, const Setting& s, Index t) {
  const Instance inst = make_instance(c, s, t);
  const Prior& p = inst.prior;
  const Index budget = c.budget.value_or(std::min(c.n, 5 * c.bandwidth));
  require(budget >= 1, "fig10-setsize: budget must be >= 1");
  const double target = (1.0 - c.reduction) * mse(p, NodeList{});
  Rows rows;
  for (const std::string& name : c.samplers) {
    const SamplingSet set =
        run_sampler(name, p, budget, trial_seed(c, s, t, kSeedSampler));
    const std::vector<double> traj = prefix_mse(p, set.indices);
    Index size = budget + 1;  // censored: target not reached within budget
    for (std::size_t j = 0; j < traj.size(); ++j)
      if (traj[j] <= target) {
        size = static_cast<Index>(j + 1);
        break;
      }
    rows.push_back({s.label, t, name, budget, "size_to_target",
                    static_cast<double>(size)});
    rows.push_back({s.label, t, name, budget, "reached",
                    size <= budget ? 1.0 : 0.0});
  }
  return rows;
}

inline Rows trial_kpca(const ExperimentConfig& c, const Setting& s, Index t) {
  const KpcaSettings& k = c.kpca;
  const Matrix train = two_circles(k.n_train, trial_seed(c, s, t, kSeedData));
  const Matrix test =
      two_circles(k.n_test, trial_seed(c, s, t, kSeedObservation));
  const GramModel model =
      kpca_basis(gram_matrix(train, PolyKernel{k.degree, 1.0}), k.components);
  std::vector<Vector> full(static_cast<std::size_t>(k.n_test));
  for (Index i = 0; i < k.n_test; ++i)
    full[static_cast<std::size_t>(i)] =
        kpca_project(model, test.row(i).transpose());
  Rows rows;
  for (Index b : k.budgets) {
    const ReducedProjector proj =
        build_reduced_projector(model, b, k.sigma_w2);
    double sq = 0.0;
    double rel = 0.0;
    for (Index i = 0; i < k.n_test; ++i) {
      const Vector& ref = full[static_cast<std::size_t>(i)];
      const Vector d = sub_project(proj, train, test.row(i).transpose()) - ref;
      sq += d.squaredNorm();
      rel += d.norm() / std::max(ref.norm(), 1e-300);
    }
    const double nt = static_cast<double>(k.n_test);
    rows.push_back({s.label, t, "greedy", b, "mean_sq_error", sq / nt});
    rows.push_back({s.label, t, "greedy", b, "mean_rel_error", rel / nt});
    rows.push_back({s.label, t, "greedy", b, "kernel_evals",
                    static_cast<double>(proj.S.size())});
    rows.push_back({s.label, t, "greedy", b, "complexity_reduction",
                    1.0 - static_cast<double>(b) /
                              static_cast<double>(k.n_train)});
  }
  return rows;
}

using TrialFn = std::function<Rows(const ExperimentConfig&, const Setting&,
                                   Index)>;

inline TrialFn trial_function(const std::string& id) {
  if (id == "fig1-bounds") return trial_fig1;
  if (id == "fig5-greedy-vs-bound") return trial_fig5;
  if (id == "fig6-alpha") return trial_fig6;
  if (id == "fig7-8-subopt") return trial_fig78;
  if (id == "fig9-logdet") return trial_fig9;
  if (id == "fig10-setsize") return trial_fig10;
  if (id == "kpca-demo") return trial_kpca;
  throw ParameterError("unknown experiment \"" + id + "\"");
}

// Cheap checks that an exhaustive step will fit its cap, so a run fails
// before any work is spent.
inline void preflight(const ExperimentConfig& c) {
  if (c.experiment == "fig1-bounds") {
    for (Index m = 0; m <= c.budget.value_or(c.n); ++m)
      check_enumeration_cap(c.n, m, c.enumeration_cap);
  } else if (c.experiment == "fig7-8-subopt" || c.experiment == "fig9-logdet") {
    check_enumeration_cap(c.n, c.budget.value_or(c.bandwidth),
                          c.enumeration_cap);
  } else if (c.experiment == "fig6-alpha") {
    check_alpha_cap(c.n, c.alpha_node_cap);
  }
}

}  // namespace detail

// Runs all trials of all settings on `jobs` worker threads. Rows come back
// ordered by (setting, trial, emission order) whatever the thread count.
inline ResultTable run_experiment(const ExperimentConfig& c, unsigned jobs = 1) {
  detail::preflight(c);
  const detail::TrialFn fn = detail::trial_function(c.experiment);
  // kpca-demo ignores graph settings; keep a single pseudo-setting.
  std::vector<Setting> settings = expand_settings(c);
  if (c.experiment == "kpca-demo") {
    settings.resize(1);
    settings[0].label = "two_circles/sigma_w2=" + label_number(c.kpca.sigma_w2);
  }
  const std::size_t total = settings.size() * static_cast<std::size_t>(c.trials);
  std::vector<detail::Rows> results(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (failure) return;
      }
      try {
        results[i] = fn(c, settings[i / static_cast<std::size_t>(c.trials)],
                        static_cast<Index>(i % static_cast<std::size_t>(c.trials)));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ResultTable table;
  table.config_hash = config_hash(c);
  table.experiment = c.experiment;
  table.bandwidth =
      c.experiment == "kpca-demo" ? c.kpca.components : c.bandwidth;
  for (auto& r : results)
    table.rows.insert(table.rows.end(), std::make_move_iterator(r.begin()),
                      std::make_move_iterator(r.end()));
  return table;
}

// Writes results.csv, metadata.json and summary.json under `dir`.
inline void write_outputs(const ResultTable& t, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_text_file((base / "results.csv").string(), table_to_csv(t));
  write_text_file((base / "metadata.json").string(),
                  table_metadata(t).dump(2) + "\n");
  write_text_file((base / "summary.json").string(),
                  summarize(t).dump(2) + "\n");
}

}  // namespace gsamp

#endif  // GSAMP_EXPERIMENT_HPP_
