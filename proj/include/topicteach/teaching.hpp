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

#ifndef TOPICTEACH_TEACHING_HPP
#define TOPICTEACH_TEACHING_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <topicteach/errors.hpp>
#include <topicteach/estimators.hpp>
#include <topicteach/exact.hpp>
#include <topicteach/format.hpp>
#include <topicteach/model.hpp>
#include <topicteach/objective.hpp>
#include <topicteach/random.hpp>

/**
 * \file
 * \brief Teaching scores of document sets and sampling documents from the teaching distribution.
 *
 * The teaching score of documents x for target topics Phi is log p(x | Phi) + log p(Phi) - log m(x):
 * the likelihood of the documents with topics fixed (marginalized over assignments and mixtures),
 * times the prior density of the topics, over the learner's marginal likelihood.
 */

namespace topicteach {

enum class ScoreMode {
  /// Importance-sampling estimates of numerator and denominator.
  estimated,
  /// Full enumeration; throws GuardError when the assignment space exceeds the budget.
  exact,
  /// Enumerate when within budget, otherwise estimate.
  exact_if_feasible,
};

struct ScoreConfig {
  EstimatorConfig estimator;
  ScoreMode mode = ScoreMode::estimated;
  ExactOptions exact;
};

struct TeachingScore {
  double log_numerator = 0.0;
  double log_denominator = 0.0;
  double log_score = 0.0;
  std::optional<WeightedEstimate> numerator_diag;
  std::optional<WeightedEstimate> denominator_diag;
  bool exact = false;
};

/// Topics to teach; the remaining topics are integrated out.
struct SubsetSpec {
  std::vector<TopicId> target_topics;

  void validate(std::size_t num_topics) const {
    if (target_topics.empty()) {
      throw ParameterError{"topic subset must be nonempty"};
    }
    for (TopicId t : target_topics) {
      if (t >= num_topics) {
        throw ParameterError{"topic subset index out of range"};
      }
    }
  }
};

namespace detail {

inline bool use_exact(const ScoreConfig& config, std::size_t num_topics, std::size_t n) {
  switch (config.mode) {
    case ScoreMode::exact:
      return true;
    case ScoreMode::estimated:
      return false;
    case ScoreMode::exact_if_feasible:
      return std::pow(static_cast<double>(num_topics), static_cast<double>(n)) <= config.exact.assignment_budget;
  }
  return false;
}

inline TeachingScore score_with(std::span<const Document> docs, const Objective& numerator,
                                const Hyperparams& hyper, const ScoreConfig& config, std::uint64_t seed) {
  if (docs.empty()) {
    throw ParameterError{"teaching score needs at least one document"};
  }
  const auto denominator = Objective::marginal(hyper);
  const double prior = numerator.log_topic_prior();
  TeachingScore score;
  if (use_exact(config, hyper.num_topics(), total_words(docs))) {
    score.exact = true;
    score.log_numerator = prior + exact_log_sum(docs, numerator, config.exact);
    score.log_denominator = exact_log_sum(docs, denominator, config.exact);
  } else {
    auto num = estimate_log_sum(docs, numerator, config.estimator, derive_seed(seed, {0}));
    shift_estimate(num, prior);
    auto den = estimate_log_sum(docs, denominator, config.estimator, derive_seed(seed, {1}));
    score.log_numerator = num.log_estimate;
    score.log_denominator = den.log_estimate;
    score.numerator_diag = std::move(num);
    score.denominator_diag = std::move(den);
  }
  score.log_score = score.log_numerator - score.log_denominator;
  return score;
}

}  // namespace detail

/// Teaching score of `docs` for the whole topic model.
inline TeachingScore teaching_score(std::span<const Document> docs, const TopicModel& model, const Hyperparams& hyper,
                                    const ScoreConfig& config, std::uint64_t seed) {
  return detail::score_with(docs, Objective::likelihood(model, hyper), hyper, config, seed);
}

/// Teaching score of `docs` for the topics in `subset`.
/**
 * Words labeled with a target topic contribute phi_{t,w}; words labeled with any other topic are
 * scored by that topic's collapsed Dirichlet-categorical term. Only the target rows contribute
 * their prior density. The denominator is the same marginal likelihood as for the whole model.
 */
inline TeachingScore subset_teaching_score(std::span<const Document> docs, const TopicModel& model,
                                           const SubsetSpec& subset, const Hyperparams& hyper,
                                           const ScoreConfig& config, std::uint64_t seed) {
  subset.validate(model.num_topics());
  return detail::score_with(docs, Objective::subset(model, subset.target_topics, hyper), hyper, config, seed);
}

/// Word-flip proposal: each flip moves one uniformly chosen token to a uniformly chosen word.
struct ProposalConfig {
  /// Flips per step; 0 selects max(1, ceil(0.05 * total tokens)).
  std::size_t flips = 0;

  [[nodiscard]] std::size_t resolved(std::size_t total_tokens) const {
    const std::size_t k =
        flips != 0 ? flips
                   : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(total_tokens))));
    if (k < 1 || k > total_tokens) {
      throw ParameterError{"flips per step must lie in [1, total tokens]"};
    }
    return k;
  }
};

struct ChainState {
  std::vector<Document> docs;
  /// Noisy score attached to `docs` when they were proposed; never re-estimated while incumbent.
  double retained_log_score = 0.0;
  std::size_t step = 0;
  bool accepted = false;
  std::uint64_t seed = 0;
};

struct ChainOptions {
  /// Re-estimate the incumbent's score every step. This breaks pseudo-marginal exactness and exists
  /// only to demonstrate the resulting bias.
  bool refresh_incumbent = false;
};

/// Maps (documents, estimator seed) to a log teaching score.
using ScoreFunction = std::function<double(std::span<const Document>, std::uint64_t)>;

/// Apply `flips` random word flips to `docs` in place.
inline void flip_words(std::vector<Document>& docs, std::size_t vocab_size, std::size_t flips, Rng& rng) {
  const std::size_t n = total_words(docs);
  for (std::size_t f = 0; f < flips; ++f) {
    std::size_t position = uniform_index(n, rng);
    for (auto& doc : docs) {
      if (position < doc.size()) {
        doc.tokens[position] = static_cast<WordId>(uniform_index(vocab_size, rng));
        break;
      }
      position -= doc.size();
    }
  }
}

/// Pseudo-marginal Metropolis-Hastings over document sets of fixed lengths.
/**
 * Each step proposes k word flips, scores the proposal with a fresh estimator seed and accepts
 * with probability min(1, exp(proposed - retained)). The flip kernel is symmetric so no proposal
 * correction is needed. `visit(const ChainState&)` sees the initial state (step 0) and then every
 * step.
 */
template <class Visitor>
void run_pmmh(std::vector<Document> initial, const ScoreFunction& score, std::size_t vocab_size,
              const ProposalConfig& proposal, std::size_t iterations, std::uint64_t seed, Visitor&& visit,
              const ChainOptions& options = {}) {
  if (iterations < 1) {
    throw ParameterError{"at least one iteration is required"};
  }
  if (initial.empty() || total_words(initial) == 0) {
    throw ParameterError{"initial documents must be nonempty"};
  }
  validate_documents(initial, vocab_size);
  const std::size_t flips = proposal.resolved(total_words(initial));

  ChainState state;
  state.docs = std::move(initial);
  state.seed = seed;
  state.retained_log_score = score(state.docs, derive_seed(seed, {0, 1}));
  visit(std::as_const(state));

  std::vector<Document> candidate;
  for (std::size_t step = 1; step <= iterations; ++step) {
    auto rng = make_rng(derive_seed(seed, {step, 0}));
    candidate = state.docs;
    flip_words(candidate, vocab_size, flips, rng);
    const double proposed = score(candidate, derive_seed(seed, {step, 1}));
    if (options.refresh_incumbent) {
      state.retained_log_score = score(state.docs, derive_seed(seed, {step, 2}));
    }
    const double log_u = std::log(uniform01(rng));
    bool accept = false;
    if (proposed != kNegInf) {
      accept = state.retained_log_score == kNegInf || log_u < proposed - state.retained_log_score;
    }
    state.step = step;
    state.accepted = accept;
    if (accept) {
      std::swap(state.docs, candidate);
      state.retained_log_score = proposed;
    }
    visit(std::as_const(state));
  }
}

/// Estimated (or exact, per `config.mode`) teaching score as a ScoreFunction.
inline ScoreFunction make_teaching_scorer(const TopicModel& model, std::optional<SubsetSpec> subset,
                                          const Hyperparams& hyper, const ScoreConfig& config) {
  if (subset) {
    subset->validate(model.num_topics());
  }
  auto numerator = subset ? Objective::subset(model, subset->target_topics, hyper) : Objective::likelihood(model, hyper);
  return [numerator = std::move(numerator), hyper, config](std::span<const Document> docs, std::uint64_t s) {
    return detail::score_with(docs, numerator, hyper, config, s).log_score;
  };
}

/// Run the chain and collect every state (step 0 is the initial state).
inline std::vector<ChainState> pmmh_generate(std::vector<Document> initial, const TopicModel& model,
                                             const std::optional<SubsetSpec>& subset, const Hyperparams& hyper,
                                             const ProposalConfig& proposal, const ScoreConfig& config,
                                             std::size_t iterations, std::uint64_t seed,
                                             const ChainOptions& options = {}) {
  std::vector<ChainState> trace;
  trace.reserve(iterations + 1);
  run_pmmh(std::move(initial), make_teaching_scorer(model, subset, hyper, config), hyper.vocab_size(), proposal,
           iterations, seed, [&](const ChainState& s) { trace.push_back(s); }, options);
  return trace;
}

/// One JSON object per line: step, accepted flag, retained log score and per-document word counts.
inline void write_chain_record(std::ostream& out, const ChainState& state, std::size_t vocab_size) {
  out << "{\"step\":" << state.step << ",\"accepted\":" << (state.accepted ? "true" : "false")
      << ",\"log_score\":";
  if (std::isfinite(state.retained_log_score)) {
    out << format_double(state.retained_log_score);
  } else {
    out << "null";
  }
  out << ",\"counts\":[";
  for (std::size_t d = 0; d < state.docs.size(); ++d) {
    out << (d == 0 ? "[" : ",[");
    const auto counts = state.docs[d].counts(vocab_size);
    for (std::size_t w = 0; w < counts.size(); ++w) {
      out << (w == 0 ? "" : ",") << counts[w];
    }
    out << ']';
  }
  out << "]}\n";
}

}  // namespace topicteach

#endif  // TOPICTEACH_TEACHING_HPP
