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

#ifndef TOPICTEACH_EXPERIMENTS_HPP
#define TOPICTEACH_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include <topicteach/errors.hpp>
#include <topicteach/estimators.hpp>
#include <topicteach/exact.hpp>
#include <topicteach/format.hpp>
#include <topicteach/model.hpp>
#include <topicteach/parallel.hpp>
#include <topicteach/random.hpp>

/**
 * \file
 * \brief Estimator comparison and sample-size scaling studies on synthetic LDA data.
 */

namespace topicteach {

inline std::string_view to_string(ProposalKind kind) noexcept {
  return kind == ProposalKind::uniform ? "uniform" : "sis";
}

enum class Quantity { marginal, numerator };

inline std::string_view to_string(Quantity q) noexcept {
  return q == Quantity::marginal ? "marginal" : "numerator";
}

struct EstimatorCompareConfig {
  Hyperparams hyper = Hyperparams::symmetric(3, 5, 0.5, 0.5);
  std::size_t docs = 2;
  std::size_t doc_length = 5;
  std::size_t pairs = 512;
  /// Samples per estimate, for each of the numerator and the marginal.
  std::size_t samples = 1000;
  ExactOptions exact;
  /// Parallelism across pairs; 0 means all cores.
  std::size_t workers = 1;
};

struct EstimatorCompareRecord {
  std::size_t pair = 0;
  Quantity quantity = Quantity::marginal;
  ProposalKind kind = ProposalKind::sequential;
  double exact = 0.0;
  double log_estimate = 0.0;
  double ess = 0.0;
  double log_weight_ess = 0.0;
  double relative_error = 0.0;
};

/// Uniform and sequential estimates of the marginal likelihood and the teaching numerator, with
/// enumeration values, for document sets drawn from the LDA generative process.
/**
 * Every set draws its own topics from the prior; the numerator conditions on those topics.
 * Records are ordered by (pair, quantity, proposal).
 */
inline std::vector<EstimatorCompareRecord> estimator_compare(const EstimatorCompareConfig& config,
                                                             std::uint64_t seed) {
  config.hyper.validate();
  if (config.docs < 1 || config.doc_length < 1 || config.pairs < 1 || config.samples < 2) {
    throw ParameterError{"estimator comparison needs docs, doc length, pairs >= 1 and samples >= 2"};
  }
  const double space = std::pow(static_cast<double>(config.hyper.num_topics()),
                                static_cast<double>(config.docs * config.doc_length));
  if (space > config.exact.assignment_budget) {
    throw GuardError{"assignment space exceeds the enumeration budget", space, config.exact.assignment_budget};
  }
  constexpr std::size_t kPerPair = 4;
  std::vector<EstimatorCompareRecord> records(config.pairs * kPerPair);
  parallel_for(config.pairs, config.workers, [&](std::size_t p) {
    const std::vector<std::size_t> lengths(config.docs, config.doc_length);
    const auto sample = sample_generative(config.hyper, lengths, derive_seed(seed, {p, 0}));
    const auto& docs = sample.corpus.documents;
    ExactOptions serial = config.exact;
    serial.workers = 1;
    const double exact_marginal = exact_marginal_likelihood(docs, config.hyper, serial);
    const double exact_numerator = exact_teaching_numerator(docs, sample.model, config.hyper, serial);
    std::size_t slot = p * kPerPair;
    std::uint64_t stream = 1;
    for (Quantity q : {Quantity::marginal, Quantity::numerator}) {
      for (ProposalKind kind : {ProposalKind::uniform, ProposalKind::sequential}) {
        EstimatorConfig est;
        est.kind = kind;
        est.samples = config.samples;
        const std::uint64_t s = derive_seed(seed, {p, stream++});
        const auto estimate = q == Quantity::marginal ? is_marginal(docs, config.hyper, est, s)
                                                      : is_numerator(docs, sample.model, config.hyper, est, s);
        auto& r = records[slot++];
        r.pair = p;
        r.quantity = q;
        r.kind = kind;
        r.exact = q == Quantity::marginal ? exact_marginal : exact_numerator;
        r.log_estimate = estimate.log_estimate;
        r.ess = estimate.ess;
        r.log_weight_ess = log_weight_ess(estimate.log_weights);
        r.relative_error = estimate.relative_error;
      }
    }
  });
  return records;
}

inline void write_estimator_compare_csv(std::ostream& out, const std::vector<EstimatorCompareRecord>& records) {
  out << "pair,quantity,proposal,exact,log_estimate,ess,log_weight_ess,relative_error\n";
  for (const auto& r : records) {
    out << r.pair << ',' << to_string(r.quantity) << ',' << to_string(r.kind) << ',' << format_double(r.exact) << ','
        << format_double(r.log_estimate) << ',' << format_double(r.ess) << ',' << format_double(r.log_weight_ess)
        << ',' << format_double(r.relative_error) << '\n';
  }
}

struct ScalingConfig {
  std::size_t num_topics = 20;
  std::size_t vocab_size = 100;
  std::vector<std::size_t> lengths{10, 20, 40, 60};
  /// (alpha, beta) pairs, each applied symmetrically.
  std::vector<std::pair<double, double>> priors{{0.1, 0.1}, {1.0, 1.0}};
  std::size_t runs = 128;
  TargetConfig target{0.05, 32, std::size_t{1} << 20};
  ProposalKind kind = ProposalKind::sequential;
  /// Parallelism across runs; 0 means all cores.
  std::size_t workers = 1;
};

struct ScalingCell {
  std::size_t length = 0;
  std::size_t num_topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  /// Samples needed by each run; runs that hit the cap report the cap.
  std::vector<std::size_t> required;
  std::size_t unconverged = 0;

  [[nodiscard]] double mean() const {
    double total = 0.0;
    for (std::size_t m : required) {
      total += static_cast<double>(m);
    }
    return total / static_cast<double>(required.size());
  }

  [[nodiscard]] double median() const {
    auto v = required;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? static_cast<double>(v[n / 2]) : 0.5 * static_cast<double>(v[n / 2 - 1] + v[n / 2]);
  }

  /// Half-width of the normal 95% interval for the mean.
  [[nodiscard]] double ci95_half_width() const {
    const double m = mean();
    double ss = 0.0;
    for (std::size_t x : required) {
      ss += (static_cast<double>(x) - m) * (static_cast<double>(x) - m);
    }
    const double n = static_cast<double>(required.size());
    return n > 1 ? 1.96 * std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
};

/// Samples needed to reach the relative-error target on the marginal likelihood of one document.
/**
 * Each run draws topics and a single document of the given length from the prior, then samples in
 * batches until the target is met. Cells are ordered by (prior, length).
 */
inline std::vector<ScalingCell> scaling_bench(const ScalingConfig& config, std::uint64_t seed) {
  if (config.lengths.empty() || config.priors.empty() || config.runs < 1) {
    throw ParameterError{"scaling bench needs lengths, priors and runs >= 1"};
  }
  std::vector<ScalingCell> cells;
  for (std::size_t p = 0; p < config.priors.size(); ++p) {
    const auto [alpha, beta] = config.priors[p];
    const auto hyper = Hyperparams::symmetric(config.num_topics, config.vocab_size, alpha, beta);
    hyper.validate();
    for (std::size_t length : config.lengths) {
      if (length < 1) {
        throw ParameterError{"document lengths must be positive"};
      }
      ScalingCell cell;
      cell.length = length;
      cell.num_topics = config.num_topics;
      cell.alpha = alpha;
      cell.beta = beta;
      cell.required.resize(config.runs);
      std::vector<char> converged(config.runs, 0);
      parallel_for(config.runs, config.workers, [&](std::size_t r) {
        const std::vector<std::size_t> lengths{length};
        const auto sample = sample_generative(hyper, lengths, derive_seed(seed, {p, length, r, 0}));
        const auto estimate = run_to_target(sample.corpus.documents, Objective::marginal(hyper), config.kind,
                                            config.target, derive_seed(seed, {p, length, r, 1}));
        cell.required[r] = estimate.samples();
        converged[r] = estimate.converged ? 1 : 0;
      });
      cell.unconverged = static_cast<std::size_t>(std::count(converged.begin(), converged.end(), 0));
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

inline void write_scaling_csv(std::ostream& out, const std::vector<ScalingCell>& cells) {
  out << "n,T,alpha,beta,M_required,mean,ci95_low,ci95_high,runs,unconverged\n";
  for (const auto& c : cells) {
    const double mean = c.mean();
    const double half = c.ci95_half_width();
    out << c.length << ',' << c.num_topics << ',' << format_double(c.alpha) << ',' << format_double(c.beta) << ','
        << format_double(c.median()) << ',' << format_double(mean) << ',' << format_double(mean - half) << ','
        << format_double(mean + half) << ',' << c.required.size() << ',' << c.unconverged << '\n';
  }
}

}  // namespace topicteach

#endif  // TOPICTEACH_EXPERIMENTS_HPP
