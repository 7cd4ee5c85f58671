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

#ifndef TOPICTEACH_OBJECTIVE_HPP
#define TOPICTEACH_OBJECTIVE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <topicteach/errors.hpp>
#include <topicteach/log_math.hpp>
#include <topicteach/matrix.hpp>
#include <topicteach/model.hpp>

/**
 * \file
 * \brief The quantity summed over topic assignments.
 *
 * Every sum the library computes over assignments z has the form
 *
 *   sum_z prod_d DirCat(z_d | alpha) * prod_{t collapsed} DirCat(w_t | beta) * prod_{i: z_i fixed} phi_{z_i, w_i}
 *
 * where each topic is either held fixed at a row of the target model or integrated out. With no
 * fixed topics this is the learner's marginal likelihood; with every topic fixed it is the
 * likelihood of the documents under the target topics; in between it is the subset-teaching
 * numerator. The Dirichlet density of the fixed rows is a separate constant, see log_topic_prior().
 */

namespace topicteach {

class Objective {
 public:
  /// All topics integrated out.
  static Objective marginal(const Hyperparams& hyper) {
    hyper.validate();
    Objective o;
    o.hyper_ = hyper;
    o.fixed_.assign(hyper.num_topics(), 0);
    return o;
  }

  /// All topics fixed at `model`.
  static Objective likelihood(const TopicModel& model, const Hyperparams& hyper) {
    std::vector<TopicId> all(model.num_topics());
    for (std::size_t t = 0; t < all.size(); ++t) {
      all[t] = static_cast<TopicId>(t);
    }
    return subset(model, all, hyper);
  }

  /// The listed topics fixed at their rows of `model`; the rest integrated out.
  static Objective subset(const TopicModel& model, std::span<const TopicId> topics, const Hyperparams& hyper) {
    hyper.validate();
    if (model.num_topics() != hyper.num_topics() || model.vocab_size() != hyper.vocab_size()) {
      throw ParameterError{"topic model shape does not match hyperparameters"};
    }
    if (topics.empty()) {
      throw ParameterError{"topic subset must be nonempty"};
    }
    Objective o;
    o.hyper_ = hyper;
    o.fixed_.assign(hyper.num_topics(), 0);
    for (TopicId t : topics) {
      if (t >= hyper.num_topics()) {
        throw ParameterError{"topic subset index out of range"};
      }
      o.fixed_[t] = 1;
    }
    o.phi_ = model.phi;
    o.log_phi_ = Matrix<double>{model.num_topics(), model.vocab_size()};
    for (std::size_t t = 0; t < model.num_topics(); ++t) {
      for (std::size_t w = 0; w < model.vocab_size(); ++w) {
        const double p = model.phi(t, w);
        o.log_phi_(t, w) = p > 0.0 ? std::log(p) : kNegInf;
      }
    }
    return o;
  }

  [[nodiscard]] const Hyperparams& hyper() const noexcept { return hyper_; }
  [[nodiscard]] std::size_t num_topics() const noexcept { return hyper_.num_topics(); }
  [[nodiscard]] std::size_t vocab_size() const noexcept { return hyper_.vocab_size(); }

  [[nodiscard]] bool fixed(std::size_t t) const noexcept { return fixed_[t] != 0; }
  [[nodiscard]] bool any_fixed() const noexcept {
    return std::any_of(fixed_.begin(), fixed_.end(), [](char f) { return f != 0; });
  }

  [[nodiscard]] double phi(std::size_t t, std::size_t w) const noexcept { return phi_(t, w); }
  [[nodiscard]] double log_phi(std::size_t t, std::size_t w) const noexcept { return log_phi_(t, w); }

  /// Sum of log Dirichlet(beta) densities of the fixed rows.
  [[nodiscard]] double log_topic_prior() const {
    double result = 0.0;
    for (std::size_t t = 0; t < fixed_.size(); ++t) {
      if (fixed(t)) {
        result += log_dirichlet_density(phi_.row(t), hyper_.beta);
      }
    }
    return result;
  }

 private:
  Objective() = default;

  Hyperparams hyper_;
  std::vector<char> fixed_;
  Matrix<double> phi_;
  Matrix<double> log_phi_;
};

namespace detail {

/// Count tables grown token by token, as used by sequential sampling and enumeration.
struct TokenCounts {
  TokenCounts(std::size_t num_docs, std::size_t num_topics, std::size_t vocab_size)
      : doc_topic(num_docs, num_topics), doc_totals(num_docs, 0), topic_word(num_topics, vocab_size),
        topic_totals(num_topics, 0) {}

  void add(std::size_t d, WordId w, TopicId t) noexcept {
    ++doc_topic(d, t);
    ++doc_totals[d];
    ++topic_word(t, w);
    ++topic_totals[t];
  }

  void remove(std::size_t d, WordId w, TopicId t) noexcept {
    --doc_topic(d, t);
    --doc_totals[d];
    --topic_word(t, w);
    --topic_totals[t];
  }

  void clear() noexcept {
    doc_topic.fill(0);
    std::fill(doc_totals.begin(), doc_totals.end(), 0);
    topic_word.fill(0);
    std::fill(topic_totals.begin(), topic_totals.end(), 0);
  }

  Matrix<Count> doc_topic;
  std::vector<Count> doc_totals;
  Matrix<Count> topic_word;
  std::vector<Count> topic_totals;
};

}  // namespace detail

/// Direct evaluation of the log summand for one complete assignment `z`.
/**
 * Computed from the final count tables through log_dircat, independently of the incremental
 * updates used by samplers and enumerators. Excludes log_topic_prior().
 */
inline double log_objective_term(std::span<const Document> docs, const std::vector<std::vector<TopicId>>& z,
                                 const Objective& objective) {
  const auto& hyper = objective.hyper();
  const auto state = AssignmentState::from_assignments(docs, hyper.num_topics(), hyper.vocab_size(), z);
  double result = 0.0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    result += log_dircat(state.doc_topic_counts().row(d), hyper.alpha);
  }
  for (std::size_t t = 0; t < hyper.num_topics(); ++t) {
    if (!objective.fixed(t)) {
      result += log_dircat(state.topic_word_counts().row(t), hyper.beta);
    }
  }
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const TopicId t = z[d][i];
      if (objective.fixed(t)) {
        result += objective.log_phi(t, docs[d].tokens[i]);
      }
    }
  }
  return result;
}

}  // namespace topicteach

#endif  // TOPICTEACH_OBJECTIVE_HPP
