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

#ifndef TOPICTEACH_MODEL_HPP
#define TOPICTEACH_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <topicteach/errors.hpp>
#include <topicteach/log_math.hpp>
#include <topicteach/matrix.hpp>
#include <topicteach/random.hpp>

/**
 * \file
 * \brief LDA probability kernel: Dirichlet-categorical terms, generative sampling and the collapsed
 * Gibbs sampler.
 */

namespace topicteach {

using WordId = std::uint32_t;
using TopicId = std::uint32_t;
using Count = std::int64_t;

/// LDA prior: T topics over a W-word vocabulary with concentrations alpha (length T) and beta (length W).
struct Hyperparams {
  std::vector<double> alpha;
  std::vector<double> beta;

  /// Constant concentration vectors.
  static Hyperparams symmetric(std::size_t num_topics, std::size_t vocab_size, double alpha, double beta) {
    Hyperparams h{std::vector<double>(num_topics, alpha), std::vector<double>(vocab_size, beta)};
    h.validate();
    return h;
  }

  [[nodiscard]] std::size_t num_topics() const noexcept { return alpha.size(); }
  [[nodiscard]] std::size_t vocab_size() const noexcept { return beta.size(); }

  [[nodiscard]] double alpha_sum() const noexcept {
    double s = 0.0;
    for (double a : alpha) {
      s += a;
    }
    return s;
  }

  [[nodiscard]] double beta_sum() const noexcept {
    double s = 0.0;
    for (double b : beta) {
      s += b;
    }
    return s;
  }

  void validate() const {
    if (alpha.empty() || beta.empty()) {
      throw ParameterError{"hyperparameters need at least one topic and one word"};
    }
    for (double a : alpha) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw ParameterError{"alpha entries must be positive and finite"};
      }
    }
    for (double b : beta) {
      if (!(b > 0.0) || !std::isfinite(b)) {
        throw ParameterError{"beta entries must be positive and finite"};
      }
    }
  }
};

/// Bijection between token strings and word indices.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Vocabulary of placeholder words "w0", "w1", ... for synthetic corpora.
  static Vocabulary synthetic(std::size_t size) {
    Vocabulary v;
    for (std::size_t i = 0; i < size; ++i) {
      v.add("w" + std::to_string(i));
    }
    return v;
  }

  /// Index of `word`, inserting it if absent.
  WordId add(std::string_view word) {
    const auto [it, inserted] = index_.try_emplace(std::string{word}, static_cast<WordId>(words_.size()));
    if (inserted) {
      words_.emplace_back(word);
    }
    return it->second;
  }

  [[nodiscard]] std::optional<WordId> find(std::string_view word) const {
    const auto it = index_.find(std::string{word});
    if (it == index_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  [[nodiscard]] const std::string& word(WordId index) const { return words_.at(index); }
  [[nodiscard]] std::span<const std::string> words() const noexcept { return words_; }
  [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

/// A bag of words stored in reading order.
struct Document {
  std::string id;
  std::string title;
  std::vector<WordId> tokens;

  [[nodiscard]] std::size_t size() const noexcept { return tokens.size(); }
  [[nodiscard]] bool empty() const noexcept { return tokens.empty(); }

  /// Word counts, length `vocab_size`.
  [[nodiscard]] std::vector<Count> counts(std::size_t vocab_size) const {
    std::vector<Count> c(vocab_size, 0);
    for (WordId w : tokens) {
      ++c[w];
    }
    return c;
  }

  friend bool operator==(const Document& a, const Document& b) { return a.tokens == b.tokens; }
};

struct Corpus {
  Vocabulary vocabulary;
  std::vector<Document> documents;

  [[nodiscard]] std::size_t total_words() const noexcept {
    std::size_t n = 0;
    for (const auto& d : documents) {
      n += d.size();
    }
    return n;
  }
};

inline std::size_t total_words(std::span<const Document> docs) noexcept {
  std::size_t n = 0;
  for (const auto& d : docs) {
    n += d.size();
  }
  return n;
}

/// Throws if any token is outside [0, vocab_size).
inline void validate_documents(std::span<const Document> docs, std::size_t vocab_size) {
  for (const auto& d : docs) {
    for (WordId w : d.tokens) {
      if (w >= vocab_size) {
        throw ParameterError{"token index " + std::to_string(w) + " outside vocabulary of size " +
                             std::to_string(vocab_size)};
      }
    }
  }
}

namespace detail {

inline void validate_stochastic_rows(const Matrix<double>& m, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (double p : m.row(r)) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw ParameterError{std::string{what} + " entries must be finite and nonnegative"};
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ParameterError{std::string{what} + " row " + std::to_string(r) + " sums to " + std::to_string(sum)};
    }
  }
}

}  // namespace detail

/// Target hypothesis: T word distributions (rows of phi).
struct TopicModel {
  Matrix<double> phi;

  static TopicModel from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
      throw ParameterError{"topic model needs at least one topic and one word"};
    }
    TopicModel m{Matrix<double>{rows.size(), rows.front().size()}};
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t].size() != m.phi.cols()) {
        throw ParameterError{"topic rows differ in length"};
      }
      std::copy(rows[t].begin(), rows[t].end(), m.phi.row(t).begin());
    }
    m.validate();
    return m;
  }

  [[nodiscard]] std::size_t num_topics() const noexcept { return phi.rows(); }
  [[nodiscard]] std::size_t vocab_size() const noexcept { return phi.cols(); }

  void validate() const { detail::validate_stochastic_rows(phi, "topic"); }
};

/// Per-document topic mixture weights.
struct ThetaSet {
  Matrix<double> theta;

  void validate() const { detail::validate_stochastic_rows(theta, "theta"); }
};

/// Log Dirichlet-categorical probability of one particular sequence with the given counts.
/**
 * log [ Gamma(sum a) / Gamma(n + sum a) * prod_i Gamma(x_i + a_i) / Gamma(a_i) ]
 */
template <class Counts, class Concentration>
double log_dircat(const Counts& counts, const Concentration& alpha) {
  if (std::ranges::size(counts) != std::ranges::size(alpha)) {
    throw ParameterError{"log_dircat: counts and concentration differ in length"};
  }
  double alpha_sum = 0.0;
  double n = 0.0;
  double result = 0.0;
  auto a_it = std::ranges::begin(alpha);
  for (auto x : counts) {
    const double a = static_cast<double>(*a_it++);
    if (!(a > 0.0)) {
      throw ParameterError{"log_dircat: concentration entries must be positive"};
    }
    if (x < 0) {
      throw ParameterError{"log_dircat: counts must be nonnegative"};
    }
    const double xd = static_cast<double>(x);
    if (xd > 0.0) {
      result += std::lgamma(xd + a) - std::lgamma(a);
    }
    alpha_sum += a;
    n += xd;
  }
  return result + std::lgamma(alpha_sum) - std::lgamma(n + alpha_sum);
}

/// Log density of `p` under Dirichlet(`beta`).
/**
 * A zero entry paired with beta < 1 has infinite density and is rejected; with beta > 1 it
 * yields -inf.
 */
inline double log_dirichlet_density(std::span<const double> p, std::span<const double> beta) {
  if (p.size() != beta.size()) {
    throw ParameterError{"log_dirichlet_density: dimension mismatch"};
  }
  double beta_sum = 0.0;
  double result = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    beta_sum += beta[i];
    result -= std::lgamma(beta[i]);
    if (beta[i] == 1.0) {
      continue;
    }
    if (p[i] == 0.0) {
      if (beta[i] < 1.0) {
        throw DomainError{"Dirichlet density is infinite: topic has a zero entry where beta < 1"};
      }
      return kNegInf;
    }
    result += (beta[i] - 1.0) * std::log(p[i]);
  }
  return result + std::lgamma(beta_sum);
}

/// Token-to-topic labels with the count tables they induce.
class AssignmentState {
 public:
  AssignmentState() = default;

  /// Build count tables from labels `z` (one vector per document, aligned with tokens).
  static AssignmentState from_assignments(std::span<const Document> docs, std::size_t num_topics,
                                          std::size_t vocab_size, std::vector<std::vector<TopicId>> z) {
    if (z.size() != docs.size()) {
      throw ParameterError{"assignment covers a different number of documents"};
    }
    AssignmentState s;
    s.z_ = std::move(z);
    s.doc_topic_ = Matrix<Count>{docs.size(), num_topics};
    s.topic_word_ = Matrix<Count>{num_topics, vocab_size};
    s.topic_totals_.assign(num_topics, 0);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (s.z_[d].size() != docs[d].size()) {
        throw ParameterError{"assignment length differs from document length"};
      }
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const TopicId t = s.z_[d][i];
        if (t >= num_topics) {
          throw ParameterError{"topic label out of range"};
        }
        const WordId w = docs[d].tokens[i];
        if (w >= vocab_size) {
          throw ParameterError{"token index out of range"};
        }
        ++s.doc_topic_(d, t);
        ++s.topic_word_(t, w);
        ++s.topic_totals_[t];
      }
    }
    return s;
  }

  [[nodiscard]] std::size_t num_topics() const noexcept { return topic_word_.rows(); }
  [[nodiscard]] std::size_t vocab_size() const noexcept { return topic_word_.cols(); }
  [[nodiscard]] std::size_t num_docs() const noexcept { return z_.size(); }

  [[nodiscard]] const std::vector<std::vector<TopicId>>& z() const noexcept { return z_; }
  [[nodiscard]] TopicId topic(std::size_t d, std::size_t i) const { return z_.at(d).at(i); }
  [[nodiscard]] const Matrix<Count>& doc_topic_counts() const noexcept { return doc_topic_; }
  [[nodiscard]] const Matrix<Count>& topic_word_counts() const noexcept { return topic_word_; }
  [[nodiscard]] std::span<const Count> topic_totals() const noexcept { return topic_totals_; }

  /// Relabel token i of document d (whose word is `word`) to topic t, updating the counts.
  void reassign(std::size_t d, std::size_t i, WordId word, TopicId t) noexcept {
    const TopicId old = z_[d][i];
    --doc_topic_(d, old);
    --topic_word_(old, word);
    --topic_totals_[old];
    ++doc_topic_(d, t);
    ++topic_word_(t, word);
    ++topic_totals_[t];
    z_[d][i] = t;
  }

  /// True when the count tables equal those recomputed from (docs, z).
  [[nodiscard]] bool consistent_with(std::span<const Document> docs) const {
    try {
      return from_assignments(docs, num_topics(), vocab_size(), z_) == *this;
    } catch (const ParameterError&) {
      return false;
    }
  }

  friend bool operator==(const AssignmentState&, const AssignmentState&) = default;

 private:
  std::vector<std::vector<TopicId>> z_;
  Matrix<Count> doc_topic_;
  Matrix<Count> topic_word_;
  std::vector<Count> topic_totals_;
};

/// Collapsed joint log p(z, w | alpha, beta) = sum_d log DirCat(z_d | alpha) + sum_t log DirCat(w_t | beta).
inline double log_collapsed_joint(const AssignmentState& state, const Hyperparams& hyper) {
  double result = 0.0;
  for (std::size_t d = 0; d < state.num_docs(); ++d) {
    result += log_dircat(state.doc_topic_counts().row(d), hyper.alpha);
  }
  for (std::size_t t = 0; t < state.num_topics(); ++t) {
    result += log_dircat(state.topic_word_counts().row(t), hyper.beta);
  }
  return result;
}

/// sum_i log phi_{z_i, w_i}; -inf when an assigned word has probability zero.
inline double log_word_likelihood(std::span<const Document> docs, const std::vector<std::vector<TopicId>>& z,
                                  const TopicModel& model) {
  if (z.size() != docs.size()) {
    throw ParameterError{"assignment covers a different number of documents"};
  }
  double result = 0.0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (z[d].size() != docs[d].size()) {
      throw ParameterError{"assignment length differs from document length"};
    }
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const double p = model.phi(z[d][i], docs[d].tokens[i]);
      if (p == 0.0) {
        return kNegInf;
      }
      result += std::log(p);
    }
  }
  return result;
}

/// Output of the generative process.
struct GenerativeSample {
  TopicModel model;
  ThetaSet theta;
  Corpus corpus;
  AssignmentState assignments;
};

namespace detail {

inline void sample_documents_into(const TopicModel& model, const Hyperparams& hyper,
                                  std::span<const std::size_t> doc_lengths, Rng& rng, GenerativeSample& out) {
  const std::size_t num_topics = hyper.num_topics();
  const std::size_t vocab_size = hyper.vocab_size();
  out.theta.theta = Matrix<double>{doc_lengths.size(), num_topics};
  out.corpus.vocabulary = Vocabulary::synthetic(vocab_size);
  out.corpus.documents.assign(doc_lengths.size(), Document{});
  std::vector<std::vector<TopicId>> z(doc_lengths.size());
  for (std::size_t d = 0; d < doc_lengths.size(); ++d) {
    const auto theta = sample_dirichlet(hyper.alpha, rng);
    std::copy(theta.begin(), theta.end(), out.theta.theta.row(d).begin());
    auto& doc = out.corpus.documents[d];
    doc.id = std::to_string(d);
    doc.tokens.resize(doc_lengths[d]);
    z[d].resize(doc_lengths[d]);
    for (std::size_t i = 0; i < doc_lengths[d]; ++i) {
      const auto t = static_cast<TopicId>(sample_categorical(theta, rng));
      z[d][i] = t;
      doc.tokens[i] = static_cast<WordId>(sample_categorical(model.phi.row(t), rng));
    }
  }
  out.assignments = AssignmentState::from_assignments(out.corpus.documents, num_topics, vocab_size, std::move(z));
}

inline void check_lengths(std::span<const std::size_t> doc_lengths) {
  if (doc_lengths.empty()) {
    throw ParameterError{"at least one document length is required"};
  }
}

}  // namespace detail

/// Draw topics, mixtures, labels and words from the LDA generative process.
inline GenerativeSample sample_generative(const Hyperparams& hyper, std::span<const std::size_t> doc_lengths,
                                          std::uint64_t seed) {
  hyper.validate();
  detail::check_lengths(doc_lengths);
  auto rng = make_rng(seed);
  GenerativeSample out;
  out.model.phi = Matrix<double>{hyper.num_topics(), hyper.vocab_size()};
  for (std::size_t t = 0; t < hyper.num_topics(); ++t) {
    const auto phi = sample_dirichlet(hyper.beta, rng);
    std::copy(phi.begin(), phi.end(), out.model.phi.row(t).begin());
  }
  detail::sample_documents_into(out.model, hyper, doc_lengths, rng, out);
  return out;
}

/// Draw documents from LDA with the topics held fixed at `model`.
inline GenerativeSample sample_documents(const TopicModel& model, const Hyperparams& hyper,
                                         std::span<const std::size_t> doc_lengths, std::uint64_t seed) {
  hyper.validate();
  detail::check_lengths(doc_lengths);
  if (model.num_topics() != hyper.num_topics() || model.vocab_size() != hyper.vocab_size()) {
    throw ParameterError{"topic model shape does not match hyperparameters"};
  }
  auto rng = make_rng(seed);
  GenerativeSample out;
  out.model = model;
  detail::sample_documents_into(model, hyper, doc_lengths, rng, out);
  return out;
}

namespace detail {

// Unnormalized collapsed Gibbs weights for token (d, i) with the token itself removed; returns their sum.
inline double gibbs_weights(const AssignmentState& state, const Hyperparams& hyper, double beta_sum, WordId w,
                            std::size_t d, std::size_t i, std::span<double> out) noexcept {
  const TopicId own = state.z()[d][i];
  const auto& doc_topic = state.doc_topic_counts();
  const auto& topic_word = state.topic_word_counts();
  const auto totals = state.topic_totals();
  double total = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double self = (t == own) ? 1.0 : 0.0;
    const double n_dt = static_cast<double>(doc_topic(d, t)) - self;
    const double n_tw = static_cast<double>(topic_word(t, w)) - self;
    const double n_t = static_cast<double>(totals[t]) - self;
    out[t] = (n_dt + hyper.alpha[t]) * (n_tw + hyper.beta[w]) / (n_t + beta_sum);
    total += out[t];
  }
  return total;
}

}  // namespace detail

/// Normalized collapsed Gibbs conditional for token i of document d, with that token removed from the counts.
inline std::vector<double> gibbs_conditional(const AssignmentState& state, const Hyperparams& hyper,
                                             std::span<const Document> docs, std::size_t d, std::size_t i) {
  if (d >= docs.size() || i >= docs[d].size() || d >= state.num_docs() || i >= state.z()[d].size()) {
    throw ParameterError{"gibbs_conditional: token index out of range"};
  }
  std::vector<double> p(state.num_topics());
  const double total = detail::gibbs_weights(state, hyper, hyper.beta_sum(), docs[d].tokens[i], d, i, p);
  for (double& v : p) {
    v /= total;
  }
  return p;
}

/// One full sweep of single-token resampling in corpus order.
inline void gibbs_sweep(AssignmentState& state, const Hyperparams& hyper, std::span<const Document> docs, Rng& rng) {
  std::vector<double> p(state.num_topics());
  const double beta_sum = hyper.beta_sum();
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const WordId w = docs[d].tokens[i];
      const double total = detail::gibbs_weights(state, hyper, beta_sum, w, d, i, p);
      state.reassign(d, i, w, static_cast<TopicId>(sample_categorical(p, total, rng)));
    }
  }
}

/// Posterior-mean topics (n_tw + beta_w) / (n_t + sum beta).
inline TopicModel posterior_mean_topics(const AssignmentState& state, const Hyperparams& hyper) {
  TopicModel m{Matrix<double>{state.num_topics(), state.vocab_size()}};
  const double beta_sum = hyper.beta_sum();
  for (std::size_t t = 0; t < state.num_topics(); ++t) {
    const double denom = static_cast<double>(state.topic_totals()[t]) + beta_sum;
    for (std::size_t w = 0; w < state.vocab_size(); ++w) {
      m.phi(t, w) = (static_cast<double>(state.topic_word_counts()(t, w)) + hyper.beta[w]) / denom;
    }
  }
  return m;
}

struct FitResult {
  AssignmentState state;
  TopicModel model;
};

/// Collapsed Gibbs sampling from a uniformly random labeling.
/**
 * `on_sweep(iteration, state)` is invoked after every sweep when provided.
 */
template <class OnSweep>
FitResult gibbs_fit(std::span<const Document> docs, const Hyperparams& hyper, std::size_t iterations,
                    std::uint64_t seed, OnSweep&& on_sweep) {
  hyper.validate();
  if (docs.empty() || total_words(docs) == 0) {
    throw ParameterError{"gibbs_fit: corpus has no tokens"};
  }
  if (iterations < 1) {
    throw ParameterError{"gibbs_fit: at least one iteration is required"};
  }
  validate_documents(docs, hyper.vocab_size());
  auto rng = make_rng(seed);
  std::vector<std::vector<TopicId>> z(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(docs[d].size());
    for (auto& t : z[d]) {
      t = static_cast<TopicId>(uniform_index(hyper.num_topics(), rng));
    }
  }
  auto state = AssignmentState::from_assignments(docs, hyper.num_topics(), hyper.vocab_size(), std::move(z));
  for (std::size_t it = 0; it < iterations; ++it) {
    gibbs_sweep(state, hyper, docs, rng);
    on_sweep(it, std::as_const(state));
  }
  auto model = posterior_mean_topics(state, hyper);
  return {std::move(state), std::move(model)};
}

inline FitResult gibbs_fit(std::span<const Document> docs, const Hyperparams& hyper, std::size_t iterations,
                           std::uint64_t seed) {
  return gibbs_fit(docs, hyper, iterations, seed, [](std::size_t, const AssignmentState&) {});
}

}  // namespace topicteach

#endif  // TOPICTEACH_MODEL_HPP
