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

#ifndef TOPICTEACH_LEARNER_EVAL_HPP
#define TOPICTEACH_LEARNER_EVAL_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string_view>
#include <vector>

#include <topicteach/errors.hpp>
#include <topicteach/format.hpp>
#include <topicteach/model.hpp>
#include <topicteach/parallel.hpp>
#include <topicteach/random.hpp>
#include <topicteach/teaching.hpp>

namespace topicteach {

inline constexpr std::size_t kMaxPermutationTopics = 8;

/// Sum squared error between topic matrices, minimized over relabelings of `inferred`.
inline double min_sse_over_permutations(const TopicModel& inferred, const TopicModel& truth) {
  if (inferred.num_topics() != truth.num_topics() || inferred.vocab_size() != truth.vocab_size()) {
    throw ParameterError{"topic models differ in shape"};
  }
  const std::size_t num_topics = truth.num_topics();
  if (num_topics > kMaxPermutationTopics) {
    throw ParameterError{"permutation search refused for more than 8 topics"};
  }
  // Pairwise row errors, then search permutations over the table.
  Matrix<double> cost{num_topics, num_topics};
  for (std::size_t a = 0; a < num_topics; ++a) {
    for (std::size_t b = 0; b < num_topics; ++b) {
      double sse = 0.0;
      for (std::size_t w = 0; w < truth.vocab_size(); ++w) {
        const double diff = inferred.phi(a, w) - truth.phi(b, w);
        sse += diff * diff;
      }
      cost(a, b) = sse;
    }
  }
  std::vector<std::size_t> perm(num_topics);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t t = 0; t < num_topics; ++t) {
      total += cost(perm[t], t);
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

enum class Condition { teaching, random };

inline std::string_view to_string(Condition c) noexcept {
  return c == Condition::teaching ? "teaching" : "random";
}

struct ExperimentConfig {
  TopicModel true_model;
  Hyperparams hyper;
  std::vector<std::size_t> doc_counts{1, 2, 3, 4};
  std::size_t doc_length = 20;
  std::size_t replications = 64;
  std::size_t gibbs_iterations = 1000;
  /// PMMH steps run from the random set; the final state is the teaching set.
  std::size_t burn_in = 500;
  ProposalConfig proposal;
  ScoreConfig score;
  std::uint64_t seed = 0;
  /// Parallelism across replications; 0 means all cores.
  std::size_t workers = 1;

  void validate() const {
    hyper.validate();
    true_model.validate();
    if (replications < 1 || doc_length < 1 || doc_counts.empty() || gibbs_iterations < 1 || burn_in < 1) {
      throw ParameterError{"experiment needs replications, doc length, doc counts, Gibbs iterations and burn-in >= 1"};
    }
    for (std::size_t c : doc_counts) {
      if (c < 1) {
        throw ParameterError{"document counts must be positive"};
      }
    }
  }
};

struct ErrorRecord {
  Condition condition = Condition::random;
  std::size_t num_docs = 0;
  std::size_t replication = 0;
  double sse = 0.0;
};

/// Learner error after fitting on teaching-chain documents versus documents drawn from LDA.
/**
 * For every document count and replication: draw a set from LDA with the true topics, run the
 * teaching chain from that set, fit collapsed Gibbs to both sets and record the min-permutation
 * SSE against the true topics. Records are ordered by (condition, num_docs, replication).
 */
inline std::vector<ErrorRecord> run_learning_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t cells = config.doc_counts.size() * config.replications;
  std::vector<ErrorRecord> teaching(cells);
  std::vector<ErrorRecord> random(cells);
  const auto scorer = make_teaching_scorer(config.true_model, std::nullopt, config.hyper, config.score);

  parallel_for(cells, config.workers, [&](std::size_t cell) {
    const std::size_t num_docs = config.doc_counts[cell / config.replications];
    const std::size_t rep = cell % config.replications;
    const std::uint64_t base = derive_seed(config.seed, {num_docs, rep});
    const std::vector<std::size_t> lengths(num_docs, config.doc_length);
    auto sample = sample_documents(config.true_model, config.hyper, lengths, derive_seed(base, {0}));
    const auto& random_docs = sample.corpus.documents;

    std::vector<Document> teaching_docs;
    run_pmmh(random_docs, scorer, config.hyper.vocab_size(), config.proposal, config.burn_in, derive_seed(base, {1}),
             [&](const ChainState& s) {
               if (s.step == config.burn_in) {
                 teaching_docs = s.docs;
               }
             });

    const auto random_fit = gibbs_fit(random_docs, config.hyper, config.gibbs_iterations, derive_seed(base, {2}));
    const auto teaching_fit = gibbs_fit(teaching_docs, config.hyper, config.gibbs_iterations, derive_seed(base, {3}));
    teaching[cell] = {Condition::teaching, num_docs, rep,
                      min_sse_over_permutations(teaching_fit.model, config.true_model)};
    random[cell] = {Condition::random, num_docs, rep, min_sse_over_permutations(random_fit.model, config.true_model)};
  });

  teaching.insert(teaching.end(), random.begin(), random.end());
  return teaching;
}

inline void write_error_records_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
  out << "condition,num_docs,replication,sse\n";
  for (const auto& r : records) {
    out << to_string(r.condition) << ',' << r.num_docs << ',' << r.replication << ',' << format_double(r.sse) << '\n';
  }
}

}  // namespace topicteach

#endif  // TOPICTEACH_LEARNER_EVAL_HPP
