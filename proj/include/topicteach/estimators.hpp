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

#ifndef TOPICTEACH_ESTIMATORS_HPP
#define TOPICTEACH_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <topicteach/errors.hpp>
#include <topicteach/log_math.hpp>
#include <topicteach/model.hpp>
#include <topicteach/objective.hpp>
#include <topicteach/parallel.hpp>
#include <topicteach/random.hpp>

/**
 * \file
 * \brief Importance-sampling estimates of sums over topic assignments.
 *
 * Two proposals are available. The uniform proposal labels every token independently and
 * uniformly. The sequential proposal visits tokens in corpus order (document by document,
 * position by position), labels the first token uniformly and every later token from the
 * collapsed conditional restricted to the tokens already labeled. For a fixed topic the word factor
 * of that conditional is phi_{t,w}; for an integrated-out topic it is the Dirichlet predictive
 * (n_tw + beta_w) / (n_t + sum beta).
 */

namespace topicteach {

enum class ProposalKind { uniform, sequential };

/// Stopping rule for adaptive sampling.
struct TargetConfig {
  double relative_error = 0.05;
  std::size_t batch = 256;
  std::size_t max_samples = 1U << 20U;
};

struct EstimatorConfig {
  ProposalKind kind = ProposalKind::sequential;
  /// Sample count M when no target is set.
  std::size_t samples = 1000;
  /// When set, sample in batches until the relative error falls below the target.
  std::optional<TargetConfig> target;
  /// 0 means all cores. Estimates do not depend on this.
  std::size_t workers = 1;
};

/// Log estimate together with its importance weights and diagnostics.
struct WeightedEstimate {
  double log_estimate = kNegInf;
  std::vector<double> log_weights;
  double ess = 0.0;
  double relative_error = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  bool converged = true;

  [[nodiscard]] std::size_t samples() const noexcept { return log_weights.size(); }
};

namespace detail {

struct WeightMoments {
  double variance;  // population variance of the weights scaled to mean one
  std::size_t count;
};

inline WeightMoments scaled_weight_moments(std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw ParameterError{"no importance weights"};
  }
  const double max = *std::max_element(log_weights.begin(), log_weights.end());
  if (max == kNegInf) {
    throw DomainError{"all importance weights are zero"};
  }
  double mean = 0.0;
  for (double lw : log_weights) {
    mean += std::exp(lw - max);
  }
  mean /= static_cast<double>(log_weights.size());
  double variance = 0.0;
  for (double lw : log_weights) {
    const double x = std::exp(lw - max) / mean - 1.0;
    variance += x * x;
  }
  variance /= static_cast<double>(log_weights.size());
  return {variance, log_weights.size()};
}

}  // namespace detail

/// Effective sample size M / (1 + Var(w)), with w scaled to mean one.
inline double ess(std::span<const double> log_weights) {
  const auto m = detail::scaled_weight_moments(log_weights);
  return static_cast<double>(m.count) / (1.0 + m.variance);
}

/// Effective sample size M / (1 + s^2) with s^2 the sample variance of the log weights.
///
/// Less sensitive to a single dominant weight than ess(); zero if any weight is zero.
inline double log_weight_ess(std::span<const double> log_weights) {
  if (log_weights.size() < 2) {
    throw ParameterError{"log-weight ESS needs at least two weights"};
  }
  double mean = 0.0;
  for (double lw : log_weights) {
    if (lw == kNegInf) {
      return 0.0;
    }
    mean += lw;
  }
  const auto n = static_cast<double>(log_weights.size());
  mean /= n;
  double ss = 0.0;
  for (double lw : log_weights) {
    ss += (lw - mean) * (lw - mean);
  }
  return n / (1.0 + ss / (n - 1.0));
}

/// Relative sample error (1/sqrt(M)) * sqrt(mean(w^2) / mean(w)^2 - 1).
inline double relative_error(std::span<const double> log_weights) {
  if (log_weights.size() < 2) {
    throw ParameterError{"relative error needs at least two weights"};
  }
  const auto m = detail::scaled_weight_moments(log_weights);
  return std::sqrt(m.variance / static_cast<double>(m.count));
}

/// Labels drawn for one importance sample and the log proposal density of drawing them.
struct SampleTrace {
  std::vector<std::vector<TopicId>> z;
  double log_proposal = 0.0;
};

namespace detail {

/// Reusable buffers for drawing importance samples over one document set.
class ImportanceSampler {
 public:
  ImportanceSampler(std::span<const Document> docs, const Objective& objective)
      : docs_{docs},
        objective_{objective},
        counts_{docs.size(), objective.num_topics(), objective.vocab_size()},
        weights_(objective.num_topics()),
        alpha_sum_{objective.hyper().alpha_sum()},
        beta_sum_{objective.hyper().beta_sum()} {}

  /// Draw one sample and return its log importance weight; optionally record the labels.
  double draw(ProposalKind kind, Rng& rng, SampleTrace* trace = nullptr) {
    const auto& hyper = objective_.hyper();
    const std::size_t num_topics = objective_.num_topics();
    const double log_num_topics = std::log(static_cast<double>(num_topics));
    double log_weight = 0.0;
    double log_proposal = 0.0;
    bool first = true;
    if (trace != nullptr) {
      trace->z.assign(docs_.size(), {});
    }
    assigned_.clear();
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      for (std::size_t i = 0; i < docs_[d].size(); ++i) {
        const WordId w = docs_[d].tokens[i];
        double total = 0.0;
        for (std::size_t t = 0; t < num_topics; ++t) {
          const double doc_factor = static_cast<double>(counts_.doc_topic(d, t)) + hyper.alpha[t];
          const double word_factor =
              objective_.fixed(t) ? objective_.phi(t, w)
                                  : (static_cast<double>(counts_.topic_word(t, w)) + hyper.beta[w]) /
                                        (static_cast<double>(counts_.topic_totals[t]) + beta_sum_);
          weights_[t] = doc_factor * word_factor;
          total += weights_[t];
        }
        const double log_doc_norm = std::log(static_cast<double>(counts_.doc_totals[d]) + alpha_sum_);
        TopicId t = 0;
        if (kind == ProposalKind::uniform || first) {
          t = static_cast<TopicId>(uniform_index(num_topics, rng));
          log_weight += std::log(weights_[t]) - log_doc_norm + log_num_topics;
          log_proposal -= log_num_topics;
        } else {
          if (total == 0.0) {
            log_weight = kNegInf;
            break;
          }
          t = static_cast<TopicId>(sample_categorical(weights_, total, rng));
          log_weight += std::log(total) - log_doc_norm;
          log_proposal += std::log(weights_[t] / total);
        }
        first = false;
        counts_.add(d, w, t);
        assigned_.push_back({d, w, t});
        if (trace != nullptr) {
          trace->z[d].push_back(t);
        }
        if (log_weight == kNegInf) {
          break;
        }
      }
      if (log_weight == kNegInf) {
        break;
      }
    }
    for (const auto& a : assigned_) {
      counts_.remove(a.doc, a.word, a.topic);
    }
    if (trace != nullptr) {
      trace->log_proposal = log_proposal;
    }
    return log_weight;
  }

 private:
  struct Assigned {
    std::size_t doc;
    WordId word;
    TopicId topic;
  };

  std::span<const Document> docs_;
  const Objective& objective_;
  TokenCounts counts_;
  std::vector<double> weights_;
  std::vector<Assigned> assigned_;
  double alpha_sum_;
  double beta_sum_;
};

inline constexpr std::size_t kSampleBlock = 128;

/// Fill log_weights[first, last) with samples keyed by their global index.
inline void draw_range(std::span<const Document> docs, const Objective& objective, ProposalKind kind,
                       std::uint64_t seed, std::size_t workers, std::vector<double>& log_weights, std::size_t first,
                       std::size_t last) {
  const std::size_t blocks = (last - first + kSampleBlock - 1) / kSampleBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    ImportanceSampler sampler{docs, objective};
    const std::size_t begin = first + b * kSampleBlock;
    const std::size_t end = std::min(last, begin + kSampleBlock);
    for (std::size_t s = begin; s < end; ++s) {
      auto rng = make_rng(derive_seed(seed, {s}));
      log_weights[s] = sampler.draw(kind, rng);
    }
  });
}

inline void finalize(WeightedEstimate& estimate) {
  estimate.log_estimate = log_mean_exp(estimate.log_weights);
  if (estimate.log_estimate == kNegInf) {
    estimate.ess = 0.0;
    estimate.relative_error = std::numeric_limits<double>::infinity();
    return;
  }
  estimate.ess = ess(estimate.log_weights);
  estimate.relative_error =
      estimate.log_weights.size() >= 2 ? relative_error(estimate.log_weights) : std::numeric_limits<double>::infinity();
}

inline void check_inputs(std::span<const Document> docs, const Objective& objective) {
  if (docs.empty()) {
    throw ParameterError{"estimator needs at least one document"};
  }
  validate_documents(docs, objective.vocab_size());
}

}  // namespace detail

/// Sample z from the sequential proposal, reporting the labels and log q(z).
inline double draw_importance_sample(std::span<const Document> docs, const Objective& objective, ProposalKind kind,
                                     Rng& rng, SampleTrace& trace) {
  detail::ImportanceSampler sampler{docs, objective};
  return sampler.draw(kind, rng, &trace);
}

/// Log density of labels `z` under the sequential proposal, evaluated without sampling.
inline double log_sequential_proposal(std::span<const Document> docs, const Objective& objective,
                                      const std::vector<std::vector<TopicId>>& z) {
  const auto& hyper = objective.hyper();
  const std::size_t num_topics = objective.num_topics();
  detail::TokenCounts counts{docs.size(), num_topics, objective.vocab_size()};
  const double beta_sum = hyper.beta_sum();
  double result = 0.0;
  bool first = true;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const WordId w = docs[d].tokens[i];
      const TopicId chosen = z.at(d).at(i);
      if (first) {
        result -= std::log(static_cast<double>(num_topics));
        first = false;
      } else {
        std::vector<double> weights(num_topics);
        for (std::size_t t = 0; t < num_topics; ++t) {
          const double word_factor =
              objective.fixed(t) ? objective.phi(t, w)
                                 : (static_cast<double>(counts.topic_word(t, w)) + hyper.beta[w]) /
                                       (static_cast<double>(counts.topic_totals[t]) + beta_sum);
          weights[t] = (static_cast<double>(counts.doc_topic(d, t)) + hyper.alpha[t]) * word_factor;
        }
        double total = 0.0;
        for (double v : weights) {
          total += v;
        }
        result += std::log(weights[chosen] / total);
      }
      counts.add(d, w, chosen);
    }
  }
  return result;
}

/// Sample in batches until the relative error reaches `target.relative_error` or `target.max_samples` is hit.
/**
 * Sample s always uses the seed derived from (seed, s), so the first M weights equal those of a
 * fixed-size run with M samples.
 */
inline WeightedEstimate run_to_target(std::span<const Document> docs, const Objective& objective, ProposalKind kind,
                                      const TargetConfig& target, std::uint64_t seed, std::size_t workers = 1) {
  detail::check_inputs(docs, objective);
  if (target.batch < 2) {
    throw ParameterError{"batch size must be at least 2"};
  }
  if (target.max_samples < target.batch) {
    throw ParameterError{"max_samples must be at least one batch"};
  }
  WeightedEstimate estimate;
  estimate.seed = seed;
  estimate.converged = false;
  while (estimate.log_weights.size() < target.max_samples) {
    const std::size_t first = estimate.log_weights.size();
    const std::size_t last = std::min(target.max_samples, first + target.batch);
    estimate.log_weights.resize(last);
    detail::draw_range(docs, objective, kind, seed, workers, estimate.log_weights, first, last);
    const bool any_live = std::any_of(estimate.log_weights.begin(), estimate.log_weights.end(),
                                      [](double lw) { return lw != kNegInf; });
    if (any_live && relative_error(estimate.log_weights) <= target.relative_error) {
      estimate.converged = true;
      break;
    }
  }
  detail::finalize(estimate);
  return estimate;
}

/// Importance-sampling estimate of log sum_z of the objective's summand (excluding log_topic_prior()).
inline WeightedEstimate estimate_log_sum(std::span<const Document> docs, const Objective& objective,
                                         const EstimatorConfig& config, std::uint64_t seed) {
  if (config.target) {
    return run_to_target(docs, objective, config.kind, *config.target, seed, config.workers);
  }
  detail::check_inputs(docs, objective);
  if (config.samples < 1) {
    throw ParameterError{"at least one sample is required"};
  }
  WeightedEstimate estimate;
  estimate.seed = seed;
  estimate.log_weights.resize(config.samples);
  detail::draw_range(docs, objective, config.kind, seed, config.workers, estimate.log_weights, 0, config.samples);
  detail::finalize(estimate);
  return estimate;
}

/// Adds a constant to every log weight (and so to the estimate).
inline void shift_estimate(WeightedEstimate& estimate, double log_constant) {
  for (double& lw : estimate.log_weights) {
    lw += log_constant;
  }
  estimate.log_estimate += log_constant;
}

/// Estimate of the learner's log marginal likelihood.
inline WeightedEstimate is_marginal(std::span<const Document> docs, const Hyperparams& hyper,
                                    const EstimatorConfig& config, std::uint64_t seed) {
  return estimate_log_sum(docs, Objective::marginal(hyper), config, seed);
}

/// Estimate of the log teaching numerator: topic prior density plus the fixed-topic likelihood sum.
inline WeightedEstimate is_numerator(std::span<const Document> docs, const TopicModel& model,
                                     const Hyperparams& hyper, const EstimatorConfig& config, std::uint64_t seed) {
  const auto objective = Objective::likelihood(model, hyper);
  const double prior = objective.log_topic_prior();
  auto estimate = estimate_log_sum(docs, objective, config, seed);
  shift_estimate(estimate, prior);
  return estimate;
}

/// Estimate of the log subset-teaching numerator.
inline WeightedEstimate is_subset_numerator(std::span<const Document> docs, const TopicModel& model,
                                            std::span<const TopicId> subset, const Hyperparams& hyper,
                                            const EstimatorConfig& config, std::uint64_t seed) {
  const auto objective = Objective::subset(model, subset, hyper);
  const double prior = objective.log_topic_prior();
  auto estimate = estimate_log_sum(docs, objective, config, seed);
  shift_estimate(estimate, prior);
  return estimate;
}

}  // namespace topicteach

#endif  // TOPICTEACH_ESTIMATORS_HPP
