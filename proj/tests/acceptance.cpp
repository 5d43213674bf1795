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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "gsamp/gsamp.hpp"

namespace {

using namespace gsamp;

std::map<int, std::pair<bool, std::string>> results;

void report(int id, bool ok, const std::string& what) { results[id] = {ok, what}; }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExperimentConfig load(const std::string& name) {
  return parse_config(read_json_file(std::string(GSAMP_CONFIG_DIR) + "/" + name));
}

// Rows of `t` grouped by (setting, trial) for cross-metric checks.
using TrialKey = std::pair<std::string, Index>;
std::map<TrialKey, std::map<std::string, double>> by_trial(const ResultTable& t) {
  std::map<TrialKey, std::map<std::string, double>> out;
  for (const ResultRow& r : t.rows)
    out[{r.setting, r.trial}][r.sampler + ":" + r.metric] = r.value;
  return out;
}

std::string model_of(const std::string& setting) {
  return setting.substr(0, setting.find('/'));
}

// Outer-form LMMSE error covariance with identity observation matrix:
// Sigma - Sigma C^T (C Sigma C^T + Lambda_w,S)^{-1} C Sigma.
double direct_mse(const Prior& p, const NodeList& s) {
  const Matrix vk = p.V_K();
  const Matrix sigma = vk * p.lambda.asDiagonal() * vk.transpose();
  if (s.empty()) return sigma.trace();
  const auto m = static_cast<Index>(s.size());
  Matrix cs(m, p.n()), css(m, m);
  for (Index a = 0; a < m; ++a) cs.row(a) = sigma.row(s[static_cast<std::size_t>(a)]);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) css(a, b) = cs(a, s[static_cast<std::size_t>(b)]);
    css(a, a) += p.lambda_w(s[static_cast<std::size_t>(a)]);
  }
  const Matrix gain = css.fullPivLu().solve(cs);
  return (sigma - cs.transpose() * gain).trace();
}

struct SubsetInstance {
  Prior prior;
  std::string kind;
};

std::vector<SubsetInstance> subset_instances() {
  std::vector<SubsetInstance> out;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SpectralBasis b =
        select_band(spectral_basis(gen_erdos_renyi(12, 0.3, sub_seed(41, {s, 0}))), 4);
    out.push_back({homeoscedastic_prior(b, 1.0, 1e-2), "identity-H"});
    out.push_back({make_prior(b, Vector::Ones(4),
                              uniform_vector(12, 1e-3, 1e-1, sub_seed(41, {s, 1})),
                              gaussian_matrix(18, 12, sub_seed(41, {s, 2}))),
                   "random-H"});
  }
  return out;
}

void check_fig78(const ResultTable& t) {
  const auto trials = by_trial(t);
  // Per model, per noise level: fraction of trials where greedy is optimal.
  std::map<std::string, std::pair<int, int>> low, high;
  int guarantee_exp_ok = 0, guarantee_exp_n = 0;
  int guarantee_ok = 0, guarantee_n = 0;
  for (const auto& [key, m] : trials) {
    const bool is_low = key.first.find("sigma_w2=100") != std::string::npos;
    const double rel = m.at("greedy:rel_subopt");
    auto& bucket = (is_low ? low : high)[model_of(key.first)];
    bucket.second += 1;
    if (rel <= kZeroSuboptimality) bucket.first += 1;
    if (!is_low) {
      ++guarantee_exp_n;
      // With l = |K| the exponential guarantee reads exp(-alpha).
      if (rel <= std::exp(-m.at("bound:alpha_lb")) + 1e-9) ++guarantee_exp_ok;
    }
    ++guarantee_n;
    if (rel <= m.at("bound:guarantee_exact") + 1e-9) ++guarantee_ok;
  }

  bool ok1 = true;
  std::string d1;
  for (const auto& [model, c] : low) {
    const double f = static_cast<double>(c.first) / c.second;
    ok1 = ok1 && f >= 0.90;
    d1 += " " + model + "=" + fmt("%.3f", f);
  }
  report(1, ok1 && low.size() == 3,
         "low SNR (sigma_w2=100): greedy optimal fraction per model >= 0.90:" + d1);

  int hits = 0, total = 0;
  std::string d2;
  for (const auto& [model, c] : high) {
    hits += c.first;
    total += c.second;
    d2 += " " + model + "=" + fmt("%.3f", static_cast<double>(c.first) / c.second);
  }
  const double pooled = static_cast<double>(hits) / total;
  report(2, pooled >= 0.35 && guarantee_exp_ok == guarantee_exp_n,
         "high SNR (sigma_w2=0.01): pooled optimal fraction " + fmt("%.3f", pooled) +
             " >= 0.35 (" + d2.substr(1) + "); rel <= exp(-alpha_lb) in " +
             std::to_string(guarantee_exp_ok) + "/" + std::to_string(guarantee_exp_n));
  report(8, guarantee_ok == guarantee_n,
         "greedy rel. suboptimality <= (1 - alpha_lb/k)^l + 1e-9 in " +
             std::to_string(guarantee_ok) + "/" + std::to_string(guarantee_n) +
             " exhaustive comparisons");
}

void check_alpha_bound() {
  const ResultTable t = run_experiment(load("fig6-alpha.json"));
  int ok = 0, n = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [key, m] : by_trial(t)) {
    ++n;
    const double gap = m.at("alpha:alpha_lb_homeo") - m.at("alpha:alpha_exact");
    worst = std::max(worst, gap);
    if (gap <= 1e-9) ++ok;
  }
  report(3, n >= 100 && ok == n,
         "alpha_lb_homeo <= alpha_exact + 1e-9 on " + std::to_string(ok) + "/" +
             std::to_string(n) + " instances (n=8, |K|=3); max(lb - exact) = " +
             fmt("%.3g", worst));
}

void check_sandwich_and_set_size() {
  std::uint64_t sets = 0, sandwich_bad = 0, size_bad = 0;
  for (const SubsetInstance& inst : subset_instances()) {
    const BoundsReport r = bounds_report(inst.prior);
    for (Index m = 0; m <= 12; ++m)
      for_each_combination(12, m, [&](const NodeList& s) {
        ++sets;
        const double v = mse(inst.prior, s);
        if (r.lower(m) > v * (1 + 1e-10) || v > r.upper * (1 + 1e-10)) ++sandwich_bad;
        const SetSizeBound sb = min_set_size_bound(r, v);
        if (!sb.prefix_size_bound || *sb.prefix_size_bound > m || sb.size_bound > m)
          ++size_bad;
      });
  }
  report(4, sandwich_bad == 0,
         "lower(|S|) <= MSE(S) <= tr(W Lambda) on all " + std::to_string(sets) +
             " subsets of 20 instances (n=12, |K|=4, identity and random H); violations = " +
             std::to_string(sandwich_bad));
  report(5, size_bad == 0,
         "set-size bound <= |S| for every achieved MSE on the same subsets; violations = " +
             std::to_string(size_bad));
}

void check_rank_one_updates() {
  double worst = 0.0;
  int rebuilds = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const SpectralBasis b =
        select_band(spectral_basis(gen_erdos_renyi(100, 0.2, sub_seed(61, {s, 0}))), 7);
    const Prior p = make_prior(b, uniform_vector(7, 0.5, 2.0, sub_seed(61, {s, 1})),
                               uniform_vector(100, 1e-2, 1.0, sub_seed(61, {s, 2})));
    const GreedyResult g = greedy_mse(p, 20);
    rebuilds += static_cast<int>(g.rebuilds);
    NodeList prefix;
    for (std::size_t j = 0; j < 20; ++j) {
      prefix.push_back(g.set.indices[j]);
      const double ref = direct_mse(p, prefix);
      worst = std::max(worst, std::abs(g.objective_trajectory[j] - ref) / ref);
    }
  }
  report(6, worst <= 1e-8,
         "greedy incremental MSE vs direct inversion, 100 instances (n=100, |K|=7, l=20): "
         "max relative error " + fmt("%.3g", worst) + " (rebuilds " +
             std::to_string(rebuilds) + ")");
}

void check_set_size_to_target() {
  const ExperimentConfig c = load("fig10-setsize.json");
  const Json summary = summarize(run_experiment(c));
  std::map<std::string, double> frac;
  for (const Json& s : summary.at("stats"))
    if (s.at("metric") == "size_to_target")
      frac[s.at("sampler").get<std::string>()] =
          s.at("fraction_equal_bandwidth").get<double>();
  const double g = frac.count("greedy") ? frac.at("greedy") : 0.0;
  std::string others;
  for (const auto& [name, f] : frac)
    if (name != "greedy") others += ", " + name + " " + fmt("%.3f", f);
  report(7, g >= 0.40,
         "90% MSE reduction reached with exactly |K|=7 samples: greedy " + fmt("%.3f", g) +
             " >= 0.40" + others);
}

void check_monotonicity() {
  std::uint64_t bad_psd = 0, bad_mse = 0;
  CounterRng rng(sub_seed(91, 0));
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const std::uint64_t s = t % 50;
    const SpectralBasis b = select_band(
        spectral_basis(gen_random_weighted(10, sub_seed(91, {s, 1}))), 3);
    const std::optional<Matrix> h =
        s % 2 ? std::optional<Matrix>(gaussian_matrix(8, 10, sub_seed(91, {s, 2})))
              : std::nullopt;
    const Prior p = make_prior(b, uniform_vector(3, 0.5, 2.0, sub_seed(91, {s, 3})),
                               uniform_vector(10, 1e-2, 1.0, sub_seed(91, {s, 4})), h);
    NodeList small, large;
    std::bernoulli_distribution coin(0.5);
    for (Index i = 0; i < 10; ++i) {
      const bool in_large = coin(rng);
      if (in_large) large.push_back(i);
      if (in_large && coin(rng)) small.push_back(i);
    }
    const Matrix diff = error_covariance(p, small) - error_covariance(p, large);
    const double scale = std::max(1.0, error_covariance(p, small).norm());
    const double min_ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(diff, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (min_ev < -1e-9 * scale) ++bad_psd;
    if (mse(p, large) > mse(p, small) * (1 + 1e-12)) ++bad_mse;
  }
  report(9, bad_psd == 0 && bad_mse == 0,
         "K*(A) - K*(B) PSD and MSE(B) <= MSE(A) for 1000 nested pairs A in B; "
         "violations " + std::to_string(bad_psd) + " / " + std::to_string(bad_mse));
}

void check_logdet() {
  std::uint64_t bad = 0;
  double min_alpha = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Index n = 6 + static_cast<Index>(s % 3);
    const SpectralBasis b = select_band(
        spectral_basis(gen_random_weighted(n, sub_seed(101, {s, 0}))), 3);
    const Prior p = make_prior(b, uniform_vector(3, 0.5, 2.0, sub_seed(101, {s, 1})),
                               uniform_vector(n, 1e-2, 1.0, sub_seed(101, {s, 2})));
    const std::vector<double> f = all_subset_values(logdet_objective(p), n);
    bad += alpha_violations(f, n, 1.0, 1e-9);
    min_alpha = std::min(min_alpha, *alpha_exact_from_values(f, n).alpha_exact);
  }
  report(10, bad == 0,
         "log det objective satisfies the alpha=1 inequality on 100 instances (n<=8); "
         "violations " + std::to_string(bad) + ", min exact alpha " + fmt("%.6f", min_alpha));
}

void check_kpca() {
  const Matrix train = two_circles(200, sub_seed(111, 0));
  const Matrix test = two_circles(100, sub_seed(111, 1));
  const GramModel m = kpca_basis(gram_matrix(train, PolyKernel{2, 1.0}), 4);
  SamplingSet all;
  all.indices.resize(200);
  std::iota(all.indices.begin(), all.indices.end(), Index{0});
  const ReducedProjector full = reduced_projector_for(m, all, 1e-12);
  double worst = 0.0;
  std::vector<Vector> exact;
  for (Index i = 0; i < 100; ++i) {
    const Vector y = test.row(i).transpose();
    exact.push_back(kpca_project(m, y));
    worst = std::max(worst, (sub_project(full, train, y) - exact.back()).norm() /
                                exact.back().norm());
  }
  auto error_at = [&](Index budget) {
    const ReducedProjector proj = build_reduced_projector(m, budget, 1.0);
    double e = 0.0;
    for (Index i = 0; i < 100; ++i)
      e += (sub_project(proj, train, test.row(i).transpose()) -
            exact[static_cast<std::size_t>(i)])
               .squaredNorm();
    return e / 100.0;
  };
  const double e4 = error_at(4), e8 = error_at(8);
  report(11, worst <= 1e-5 && e8 < e4,
         "kPCA (n=200, k=4): full-set relative error " + fmt("%.3g", worst) +
             " <= 1e-5; mean sq. error l=8 " + fmt("%.4g", e8) + " < l=4 " + fmt("%.4g", e4));
}

void check_large_graph_bound() {
  ExperimentConfig c = load("fig5-greedy-vs-bound.json");
  c.trials = 3;
  const ResultTable t = run_experiment(c);
  double violations = 0.0, ratio = 0.0;
  int n = 0;
  for (const ResultRow& r : t.rows) {
    if (r.metric == "size_bound_violations") violations += r.value;
    if (r.metric == "terminal_mse_over_lower") {
      ratio = std::max(ratio, r.value);
      ++n;
    }
  }
  report(12, violations == 0.0 && n == 3,
         "n=500, |K|=20 ER: greedy size >= set-size bound at every step of 3 runs "
         "(violations " + fmt("%.0f", violations) + "); terminal MSE / lower bound <= " +
             fmt("%.4f", ratio));
}

}  // namespace

int main() {
  try {
    check_fig78(run_experiment(load("fig7-8-subopt.json")));
    check_alpha_bound();
    check_sandwich_and_set_size();
    check_rank_one_updates();
    check_set_size_to_target();
    check_monotonicity();
    check_logdet();
    check_kpca();
    check_large_graph_bound();
  } catch (const std::exception& e) {
    std::printf("FAIL [-] aborted: %s\n", e.what());
    return 1;
  }
  int failures = 0;
  for (const auto& [id, r] : results) {
    std::printf("%s [%d] %s\n", r.first ? "PASS" : "FAIL", id, r.second.c_str());
    if (!r.first) ++failures;
  }
  if (results.size() != 12) {
    std::printf("FAIL [-] expected 12 criteria, ran %zu\n", results.size());
    ++failures;
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
