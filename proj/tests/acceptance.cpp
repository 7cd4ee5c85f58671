// Copyright 2026 The topicteach Authors.
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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <topicteach/topicteach.hpp>

#include "test_support.hpp"

namespace {

using namespace topicteach;
namespace tt = topicteach::testing;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  return lo + 1 < v.size() ? v[lo] * (1.0 - frac) + v[lo + 1] * frac : v[lo];
}

// 1. Sequential estimates bracket enumeration values.
Outcome oracle_equivalence() {
  constexpr std::size_t kInstances = 16;
  constexpr std::size_t kReps = 200;
  EstimatorConfig config;
  config.samples = 1000;
  std::size_t within = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < kInstances; ++i) {
    const auto inst = tt::random_instance(derive_seed(2024, {i}), 8, 3, 5);
    const double exact_marginal = exact_marginal_likelihood(inst.docs, inst.hyper);
    const double exact_numerator = exact_teaching_numerator(inst.docs, inst.model, inst.hyper);
    for (int which = 0; which < 2; ++which) {
      std::vector<double> logs;
      for (std::uint64_t r = 0; r < kReps; ++r) {
        const auto seed = derive_seed(i, {static_cast<std::uint64_t>(which), r});
        logs.push_back(which == 0 ? is_marginal(inst.docs, inst.hyper, config, seed).log_estimate
                                  : is_numerator(inst.docs, inst.model, inst.hyper, config, seed).log_estimate);
      }
      const double exact = which == 0 ? exact_marginal : exact_numerator;
      const double se = tt::standard_error(logs);
      const double z = std::abs(tt::mean(logs) - exact) / std::max(se, 1e-300);
      if (std::abs(tt::mean(logs) - exact) <= 3.0 * se + 1e-9) {
        ++within;
      }
      if (std::abs(tt::mean(logs) - exact) > 1e-9) {
        worst = std::max(worst, z);
      }
    }
  }
  return {within == 2 * kInstances, std::to_string(within) + "/" + std::to_string(2 * kInstances) +
                                        " estimates within 3 SE (largest |z| " + fmt(worst, 3) + ")"};
}

// 2. Estimator comparison on 512 sampled pairs.
Outcome estimator_comparison() {
  EstimatorCompareConfig config;
  const auto records = estimator_compare(config, 1);
  std::map<std::pair<Quantity, ProposalKind>, std::vector<double>> lw_ess;
  std::map<std::pair<Quantity, ProposalKind>, std::vector<double>> kong_ess;
  std::map<std::pair<Quantity, ProposalKind>, std::vector<double>> errors;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.quantity, r.kind);
    lw_ess[key].push_back(r.log_weight_ess);
    kong_ess[key].push_back(r.ess);
    errors[key].push_back(r.log_estimate - r.exact);
  }
  const auto sis = std::make_pair(Quantity::marginal, ProposalKind::sequential);
  const auto uni = std::make_pair(Quantity::marginal, ProposalKind::uniform);
  const double sis_ess = tt::mean(lw_ess[sis]);
  const double uni_ess = tt::mean(lw_ess[uni]);
  const bool ess_ok = std::abs(sis_ess - 890.71) <= 0.15 * 890.71 && std::abs(uni_ess - 238.50) <= 0.15 * 238.50;
  bool variance_ok = true;
  std::string variances;
  for (Quantity q : {Quantity::marginal, Quantity::numerator}) {
    const double vs = tt::variance(errors[{q, ProposalKind::sequential}]);
    const double vu = tt::variance(errors[{q, ProposalKind::uniform}]);
    variance_ok = variance_ok && vs < vu;
    variances += std::string{" "} + std::string{to_string(q)} + " log-error var SIS " + fmt(vs, 3) + " vs uniform " +
                 fmt(vu, 3) + ";";
  }
  return {ess_ok && variance_ok, "mean ESS SIS " + fmt(sis_ess, 5) + " (target 890.71), uniform " + fmt(uni_ess, 5) +
                                     " (target 238.50); Kong ESS SIS " + fmt(tt::mean(kong_ess[sis]), 5) +
                                     ", uniform " + fmt(tt::mean(kong_ess[uni]), 5) + ";" + variances};
}

// 3. Samples needed for a 0.05 relative error.
Outcome scaling() {
  ScalingConfig config;
  config.runs = 1024;
  const auto cells = scaling_bench(config, 1);
  std::map<std::pair<double, std::size_t>, double> mean;
  std::size_t unconverged = 0;
  for (const auto& c : cells) {
    mean[{c.alpha, c.length}] = c.mean();
    unconverged += c.unconverged;
  }
  const double headline = mean[{0.1, 60}];
  bool monotone = true;
  bool sparser_harder = true;
  std::string table;
  for (double a : {0.1, 1.0}) {
    double previous = 0.0;
    table += " a=b=" + fmt(a, 2) + ":";
    for (std::size_t n : config.lengths) {
      monotone = monotone && mean[{a, n}] >= previous;
      previous = mean[{a, n}];
      table += " " + fmt(mean[{a, n}], 5);
    }
    table += ";";
  }
  for (std::size_t n : config.lengths) {
    sparser_harder = sparser_harder && mean[{0.1, n}] > mean[{1.0, n}];
  }
  const bool headline_ok = headline >= 300.0 && headline <= 3000.0;
  return {headline_ok && monotone && sparser_harder && unconverged == 0,
          "n=60 T=20 a=b=0.1 mean M " + fmt(headline, 5) + " (accept 300-3000); mean M by n=10,20,40,60" + table +
              " non-decreasing " + (monotone ? "yes" : "no") + ", sparser needs more " +
              (sparser_harder ? "yes" : "no") + ", unconverged runs " + std::to_string(unconverged)};
}

// 4. Teaching density sits between topics; likelihood density at the corners.
Outcome simplex_density() {
  const auto h = Hyperparams::symmetric(2, 3, 0.1, 0.1);
  const std::vector<std::vector<std::vector<double>>> pairs{
      {{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}},   {{0.9, 0.05, 0.05}, {0.05, 0.05, 0.9}}, {{0.7, 0.2, 0.1}, {0.1, 0.2, 0.7}},
      {{0.6, 0.3, 0.1}, {0.1, 0.3, 0.6}},   {{0.85, 0.1, 0.05}, {0.05, 0.15, 0.8}},
  };
  constexpr double kRadius = 0.15;
  bool pass = true;
  std::size_t between = 0;
  double worst_sum = 0.0;
  for (const auto& rows : pairs) {
    const auto model = TopicModel::from_rows(rows);
    const auto table = exact_teaching_distribution({1, 10, 3}, model, h);
    double teaching = 0.0;
    double likelihood = 0.0;
    for (const auto& e : table.entries) {
      teaching += e.teaching;
      likelihood += e.likelihood;
    }
    worst_sum = std::max({worst_sum, std::abs(teaching - 1.0), std::abs(likelihood - 1.0)});
    pass = pass && std::abs(teaching - 1.0) <= 1e-9 && std::abs(likelihood - 1.0) <= 1e-9;
    std::vector<double> mid(3);
    for (std::size_t w = 0; w < 3; ++w) {
      mid[w] = 0.5 * (rows[0][w] + rows[1][w]);
    }
    std::size_t near_mid = 0;
    for (const auto& e : table.entries) {
      double dist = 0.0;
      for (std::size_t w = 0; w < 3; ++w) {
        const double bary = static_cast<double>(e.counts[0][w]) / 10.0;
        dist += (bary - mid[w]) * (bary - mid[w]);
      }
      if (std::sqrt(dist) <= kRadius) {
        ++near_mid;
        pass = pass && e.difference() > 0.0;
      }
    }
    between += near_mid;
    pass = pass && near_mid > 0;
    for (const auto& row : rows) {
      const auto corner = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
      for (const auto& e : table.entries) {
        if (e.counts[0][corner] == 10) {
          pass = pass && e.difference() < 0.0;
        }
      }
    }
  }
  return {pass, std::to_string(pairs.size()) + " topic pairs; " + std::to_string(between) +
                    " documents within " + fmt(kRadius, 2) +
                    " of the topic midpoint checked positive, topic corners checked negative; max |sum - 1| " +
                    fmt(worst_sum, 3)};
}

// 5. Pseudo-marginal chains on an enumerable space.
Outcome pseudo_marginal() {
  const auto h = Hyperparams::symmetric(2, 3, 0.5, 0.5);
  const auto model = TopicModel::from_rows({{0.7, 0.2, 0.1}, {0.1, 0.2, 0.7}});
  ExactTableOptions options;
  options.weighting = DocWeighting::multiset;
  const auto table = exact_teaching_distribution({1, 4, 3}, model, h, options);
  constexpr std::size_t kSteps = 100000;
  auto chain_tv = [&](const ScoreConfig& score, bool refresh) {
    tt::CountHistogram histogram{3};
    run_pmmh({tt::make_doc({0, 1, 2, 0})}, make_teaching_scorer(model, std::nullopt, h, score), 3, {}, kSteps, 42,
             [&](const ChainState& s) { histogram.add(s.docs); }, ChainOptions{refresh});
    return histogram.total_variation(table);
  };
  ScoreConfig exact;
  exact.mode = ScoreMode::exact;
  ScoreConfig noisy;
  noisy.estimator.samples = 1;
  const double tv_exact = chain_tv(exact, false);
  const double tv_sis = chain_tv(noisy, false);
  const double tv_bug = chain_tv(noisy, true);
  return {tv_exact < 0.05 && tv_sis < 0.07 && tv_bug >= 2.0 * tv_sis,
          "TV exact scores " + fmt(tv_exact, 3) + " (< 0.05), SIS M=1 " + fmt(tv_sis, 3) +
              " (< 0.07), refreshed-incumbent variant " + fmt(tv_bug, 3) + " (ratio " + fmt(tv_bug / tv_sis, 3) +
              ", need >= 2)"};
}

// 6. Learner error after teaching versus random documents.
Outcome learner_error() {
  ExperimentConfig config;
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < 3; ++t) {
    std::vector<double> row(10, 0.25 / 7.0);
    for (std::size_t k = 0; k < 3; ++k) {
      row[3 * t + k] = 0.25;
    }
    rows.push_back(row);
  }
  config.true_model = TopicModel::from_rows(rows);
  config.hyper = Hyperparams::symmetric(3, 10, 0.1, 0.1);
  config.replications = 64;
  config.gibbs_iterations = 1000;
  config.burn_in = 500;
  config.score.estimator.samples = 100;
  config.seed = 7;
  const auto records = run_learning_experiment(config);
  bool pass = true;
  std::string detail;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<double> teach;
    std::vector<double> random;
    for (const auto& r : records) {
      if (r.num_docs == n) {
        (r.condition == Condition::teaching ? teach : random).push_back(r.sse);
      }
    }
    const double mt = median(teach);
    const double mr = median(random);
    const double iqr = quantile(random, 0.75) - quantile(random, 0.25);
    detail += " n=" + std::to_string(n) + ": teaching " + fmt(mt, 3) + " random " + fmt(mr, 3) + " (IQR " +
              fmt(iqr, 3) + ");";
    if (n <= 2) {
      pass = pass && mt < mr;
    }
    if (n == 4) {
      pass = pass && std::abs(mt - mr) < iqr;
    }
  }
  return {pass, "median SSE" + detail};
}

// 7. Rankings on a synthetic corpus.
Outcome ranking() {
  const auto h = Hyperparams::symmetric(8, 100, 50.0 / 8.0, 0.1);
  auto rng = make_rng(11);
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 0; t < 8; ++t) {
    rows.push_back(sample_dirichlet(h.beta, rng));
  }
  const auto model = TopicModel::from_rows(rows);
  std::vector<std::size_t> lengths(200);
  for (auto& l : lengths) {
    l = 2 + uniform_index(7, rng);
  }
  auto docs = sample_documents(model, h, lengths, 5).corpus.documents;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    docs[i].id = "doc" + std::to_string(1000 + i);
  }
  RankConfig config;
  config.reps = 16;
  config.score.estimator.samples = 1000;
  auto correlation = [&](const RankingResult& result) {
    std::vector<double> teaching;
    std::vector<double> cosine;
    for (const auto& r : result.records) {
      teaching.push_back(r.mean_log_teaching);
      cosine.push_back(r.cosine_score);
    }
    return pearson_correlation(teaching, cosine);
  };
  const double r_full = correlation(rank_documents(docs, model, h, config, 3));
  config.subset = SubsetSpec{{0}};
  const double r_subset = correlation(rank_documents(docs, model, h, config, 3));

  const std::vector<Document> sub(docs.begin(), docs.begin() + 30);
  ScoreConfig exact;
  exact.mode = ScoreMode::exact;
  std::string best;
  double best_score = -std::numeric_limits<double>::infinity();
  double runner_up = -std::numeric_limits<double>::infinity();
  for (const auto& d : sub) {
    const double s = teaching_score(std::vector<Document>{d}, model, h, exact, 0).log_score;
    if (s > best_score) {
      runner_up = best_score;
      best_score = s;
      best = d.id;
    } else {
      runner_up = std::max(runner_up, s);
    }
  }
  RankConfig sub_config;
  sub_config.reps = 32;
  sub_config.score.estimator.samples = 1000;
  const auto sub_ranking = rank_documents(sub, model, h, sub_config, 4);
  const std::string top = sub_ranking.records.front().id;
  return {r_full < -0.5 && r_subset <= r_full && top == best,
          "Pearson r full model " + fmt(r_full, 3) + " (< -0.5), single topic " + fmt(r_subset, 3) +
              " (<= full); exact argmax " + best + " (margin " + fmt(best_score - runner_up, 3) +
              " nats), estimated rank 1 " + top};
}

// 8. Property suites.
Outcome properties() {
  std::vector<std::string> failed;
  std::size_t checks = 0;
  auto check = [&](bool ok, const std::string& name) {
    ++checks;
    if (!ok && std::find(failed.begin(), failed.end(), name) == failed.end()) {
      failed.push_back(name);
    }
  };
  auto rng = make_rng(99);

  // DirCat chain rule: sequential predictive product equals the batch value.
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 1 + uniform_index(6, rng);
    std::vector<double> alpha(k);
    for (auto& a : alpha) {
      a = 0.05 + 3.0 * uniform01(rng);
    }
    const double alpha_sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    std::vector<Count> counts(k, 0);
    double sequential = 0.0;
    const std::size_t n = uniform_index(40, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t x = uniform_index(k, rng);
      sequential += std::log((static_cast<double>(counts[x]) + alpha[x]) / (static_cast<double>(i) + alpha_sum));
      ++counts[x];
    }
    check(std::abs(log_dircat(counts, alpha) - sequential) <= 1e-9, "dircat chain rule");
  }

  // Gibbs conditional: normalized and proportional to the enumerated joint.
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = tt::random_instance(seed);
    const auto& h = inst.hyper;
    std::vector<std::vector<TopicId>> z(inst.docs.size());
    for (std::size_t d = 0; d < inst.docs.size(); ++d) {
      for (std::size_t i = 0; i < inst.docs[d].size(); ++i) {
        z[d].push_back(static_cast<TopicId>(uniform_index(h.num_topics(), rng)));
      }
    }
    const auto state = AssignmentState::from_assignments(inst.docs, h.num_topics(), h.vocab_size(), z);
    for (std::size_t d = 0; d < inst.docs.size(); ++d) {
      for (std::size_t i = 0; i < inst.docs[d].size(); ++i) {
        const auto p = gibbs_conditional(state, h, inst.docs, d, i);
        check(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-12, "gibbs normalization");
        std::vector<double> log_joint(h.num_topics());
        for (TopicId t = 0; t < h.num_topics(); ++t) {
          auto zt = z;
          zt[d][i] = t;
          log_joint[t] = log_collapsed_joint(
              AssignmentState::from_assignments(inst.docs, h.num_topics(), h.vocab_size(), zt), h);
        }
        const auto expected = normalize_log(log_joint);
        for (std::size_t t = 0; t < p.size(); ++t) {
          check(std::abs(p[t] - expected[t]) <= 1e-10, "gibbs enumeration proportionality");
        }
      }
    }
  }

  // Count tables stay consistent with the documents through every sweep.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = tt::random_instance(seed, 40, 4, 8);
    gibbs_fit(inst.docs, inst.hyper, 25, seed, [&](std::size_t, const AssignmentState& s) {
      check(s.consistent_with(inst.docs), "count conservation");
      Count total = 0;
      for (Count c : s.topic_totals()) {
        total += c;
      }
      check(total == static_cast<Count>(total_words(inst.docs)), "count conservation");
    });
  }

  // ESS <= M with equality at equal weights; relative error zero at equal weights.
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> lw(2 + uniform_index(50, rng));
    for (double& x : lw) {
      x = 8.0 * uniform01(rng) - 4.0;
    }
    check(ess(lw) <= static_cast<double>(lw.size()) + 1e-9, "ess bound");
    const std::vector<double> equal(lw.size(), lw.front());
    check(std::abs(ess(equal) - static_cast<double>(lw.size())) <= 1e-9, "ess equality");
    check(relative_error(equal) <= 1e-12, "relative error at equal weights");
  }

  // Exact teaching scores are invariant to relabeling topics.
  ScoreConfig exact;
  exact.mode = ScoreMode::exact;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = tt::random_instance(seed + 500);
    const std::size_t num_topics = inst.hyper.num_topics();
    std::vector<std::size_t> perm(num_topics);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < num_topics; ++t) {
      const auto row = inst.model.phi.row(perm[t]);
      rows.emplace_back(row.begin(), row.end());
    }
    const double a = teaching_score(inst.docs, inst.model, inst.hyper, exact, 0).log_score;
    const double b = teaching_score(inst.docs, TopicModel::from_rows(rows), inst.hyper, exact, 0).log_score;
    check(std::abs(a - b) <= 1e-10, "topic permutation invariance");
  }

  // Every randomized operation reproduces under its seed.
  {
    const auto inst = tt::random_instance(7, 8, 3, 5);
    const std::vector<std::size_t> lengths{5, 3};
    check(sample_generative(inst.hyper, lengths, 3).corpus.documents ==
              sample_generative(inst.hyper, lengths, 3).corpus.documents,
          "seed reproducibility");
    check(sample_documents(inst.model, inst.hyper, lengths, 3).corpus.documents ==
              sample_documents(inst.model, inst.hyper, lengths, 3).corpus.documents,
          "seed reproducibility");
    check(gibbs_fit(inst.docs, inst.hyper, 20, 3).model.phi == gibbs_fit(inst.docs, inst.hyper, 20, 3).model.phi,
          "seed reproducibility");
    EstimatorConfig est;
    est.samples = 100;
    check(is_marginal(inst.docs, inst.hyper, est, 3).log_weights ==
              is_marginal(inst.docs, inst.hyper, est, 3).log_weights,
          "seed reproducibility");
    ScoreConfig score;
    score.estimator.samples = 20;
    const auto c1 = pmmh_generate(inst.docs, inst.model, std::nullopt, inst.hyper, {}, score, 30, 3);
    const auto c2 = pmmh_generate(inst.docs, inst.model, std::nullopt, inst.hyper, {}, score, 30, 3);
    check(c1.back().docs == c2.back().docs && c1.back().retained_log_score == c2.back().retained_log_score,
          "seed reproducibility");
    ExperimentConfig experiment;
    experiment.true_model = inst.model;
    experiment.hyper = inst.hyper;
    experiment.doc_counts = {1};
    experiment.replications = 1;
    experiment.doc_length = 5;
    experiment.gibbs_iterations = 20;
    experiment.burn_in = 5;
    experiment.score.estimator.samples = 10;
    const auto e1 = run_learning_experiment(experiment);
    const auto e2 = run_learning_experiment(experiment);
    check(e1[0].sse == e2[0].sse && e1[1].sse == e2[1].sse, "seed reproducibility");
    RankConfig rank;
    rank.reps = 3;
    rank.score.estimator.samples = 20;
    std::vector<Document> docs = inst.docs;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      docs[i].id = std::to_string(i);
    }
    const auto r1 = rank_documents(docs, inst.model, inst.hyper, rank, 3);
    const auto r2 = rank_documents(docs, inst.model, inst.hyper, rank, 3);
    check(r1.records.front().mean_log_teaching == r2.records.front().mean_log_teaching, "seed reproducibility");
  }

  std::string detail = std::to_string(checks) + " checks: dircat chain rule, gibbs normalization and proportionality, count conservation, ESS bound, "
                       "relative error at equal weights, topic permutation invariance, seed reproducibility";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) {
      detail += " " + f + ";";
    }
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence}, {"estimator comparison", estimator_comparison},
      {"sample-size scaling", scaling},           {"simplex density", simplex_density},
      {"pseudo-marginal chains", pseudo_marginal}, {"learner error", learner_error},
      {"document ranking", ranking},              {"property suites", properties},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.insert(std::atoi(argv[i]));
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(number)) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string{"exception: "} + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && outcome.pass;
    std::cout << "[criterion " << number << "] " << (outcome.pass ? "PASS" : "FAIL") << " " << criteria[i].first
              << ": " << outcome.detail << " (" << fmt(seconds, 3) << " s)" << std::endl;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
