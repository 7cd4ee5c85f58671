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

#ifndef TOPICTEACH_EXACT_HPP
#define TOPICTEACH_EXACT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <topicteach/errors.hpp>
#include <topicteach/format.hpp>
#include <topicteach/log_math.hpp>
#include <topicteach/model.hpp>
#include <topicteach/objective.hpp>
#include <topicteach/parallel.hpp>

/**
 * \file
 * \brief Brute-force ground truth: sums over every topic assignment and normalized teaching
 * distributions over small document spaces.
 *
 * Nothing here is clever on purpose. These routines exist to check the estimators.
 */

namespace topicteach {

/// Default cap on T^n for assignment enumeration.
inline constexpr double kAssignmentBudget = 1e8;
/// Default cap on the number of document sets in an enumerated document space.
inline constexpr double kDocSpaceBudget = 1e7;

struct ExactOptions {
  double assignment_budget = kAssignmentBudget;
  double doc_space_budget = kDocSpaceBudget;
  /// 0 means all cores. Results do not depend on this.
  std::size_t workers = 1;
};

namespace detail {

/// Odometer over assignments of a flattened token list, with O(1) log-value updates per label change.
class AssignmentEnumerator {
 public:
  AssignmentEnumerator(std::span<const Document> docs, const Objective& objective)
      : objective_{objective},
        num_topics_{objective.num_topics()},
        counts_{docs.size(), objective.num_topics(), objective.vocab_size()} {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (WordId w : docs[d].tokens) {
        tokens_.push_back({d, w});
      }
    }
    const auto& hyper = objective.hyper();
    const std::size_t n = tokens_.size();
    const double alpha_sum = hyper.alpha_sum();
    const double beta_sum = hyper.beta_sum();
    log_alpha_ = Matrix<double>{num_topics_, n + 1};
    for (std::size_t t = 0; t < num_topics_; ++t) {
      for (std::size_t c = 0; c <= n; ++c) {
        log_alpha_(t, c) = std::log(static_cast<double>(c) + hyper.alpha[t]);
      }
    }
    log_beta_ = Matrix<double>{objective.vocab_size(), n + 1};
    for (std::size_t w = 0; w < objective.vocab_size(); ++w) {
      for (std::size_t c = 0; c <= n; ++c) {
        log_beta_(w, c) = std::log(static_cast<double>(c) + hyper.beta[w]);
      }
    }
    log_beta_sum_.resize(n + 1);
    for (std::size_t c = 0; c <= n; ++c) {
      log_beta_sum_[c] = std::log(static_cast<double>(c) + beta_sum);
    }
    // Document-length normalizers do not depend on z.
    for (const auto& doc : docs) {
      for (std::size_t c = 0; c < doc.size(); ++c) {
        constant_ -= std::log(static_cast<double>(c) + alpha_sum);
      }
    }
  }

  [[nodiscard]] std::size_t num_tokens() const noexcept { return tokens_.size(); }

  /// log-sum over all assignments whose top `fixed.size()` tokens carry the labels in `fixed`.
  LogSumAccumulator sum_with_prefix(std::span<const TopicId> fixed) {
    const std::size_t n = tokens_.size();
    const std::size_t free = n - fixed.size();
    z_.assign(n, 0);
    std::copy(fixed.begin(), fixed.end(), z_.begin() + static_cast<std::ptrdiff_t>(free));
    counts_.clear();
    finite_ = 0.0;
    zeros_ = 0;
    for (std::size_t k = 0; k < n; ++k) {
      add(k, z_[k]);
    }
    LogSumAccumulator acc;
    while (true) {
      if (zeros_ == 0) {
        acc.add(constant_ + finite_);
      }
      std::size_t k = 0;
      for (; k < free; ++k) {
        const TopicId a = z_[k];
        remove(k, a);
        if (a + 1 < num_topics_) {
          z_[k] = a + 1;
          add(k, a + 1);
          break;
        }
        z_[k] = 0;
        add(k, 0);
      }
      if (k == free) {
        break;
      }
    }
    return acc;
  }

 private:
  struct Token {
    std::size_t doc;
    WordId word;
  };

  // Log predictive of token k under label t given the current counts without it.
  void apply(std::size_t k, TopicId t, double sign) noexcept {
    const auto [d, w] = tokens_[k];
    finite_ += sign * log_alpha_(t, static_cast<std::size_t>(counts_.doc_topic(d, t)));
    if (objective_.fixed(t)) {
      const double lp = objective_.log_phi(t, w);
      if (lp == kNegInf) {
        zeros_ += sign > 0 ? 1 : -1;
      } else {
        finite_ += sign * lp;
      }
    } else {
      finite_ += sign * (log_beta_(w, static_cast<std::size_t>(counts_.topic_word(t, w))) -
                         log_beta_sum_[static_cast<std::size_t>(counts_.topic_totals[t])]);
    }
  }

  void add(std::size_t k, TopicId t) noexcept {
    apply(k, t, 1.0);
    counts_.add(tokens_[k].doc, tokens_[k].word, t);
  }

  void remove(std::size_t k, TopicId t) noexcept {
    counts_.remove(tokens_[k].doc, tokens_[k].word, t);
    apply(k, t, -1.0);
  }

  const Objective& objective_;
  std::size_t num_topics_;
  std::vector<Token> tokens_;
  detail::TokenCounts counts_;
  Matrix<double> log_alpha_;
  Matrix<double> log_beta_;
  std::vector<double> log_beta_sum_;
  std::vector<TopicId> z_;
  double constant_ = 0.0;
  double finite_ = 0.0;
  long zeros_ = 0;
};

inline void check_assignment_budget(std::size_t num_topics, std::size_t n, double budget) {
  const double required = std::pow(static_cast<double>(num_topics), static_cast<double>(n));
  if (required > budget) {
    throw GuardError{"exact enumeration over " + std::to_string(num_topics) + "^" + std::to_string(n) +
                         " assignments refused",
                     required, budget};
  }
}

}  // namespace detail

/// log sum_z of the objective's summand (excluding log_topic_prior()), by full enumeration.
/**
 * The enumeration is split into a fixed number of chunks keyed by the labels of the last tokens,
 * so the floating-point result is the same for any worker count.
 */
inline double exact_log_sum(std::span<const Document> docs, const Objective& objective,
                            const ExactOptions& options = {}) {
  validate_documents(docs, objective.vocab_size());
  const std::size_t n = total_words(docs);
  const std::size_t num_topics = objective.num_topics();
  detail::check_assignment_budget(num_topics, n, options.assignment_budget);

  std::size_t prefix = 0;
  std::size_t chunks = 1;
  while (prefix < n && chunks < 64 && num_topics > 1) {
    ++prefix;
    chunks *= num_topics;
  }
  std::vector<LogSumAccumulator> partial(chunks);
  const std::size_t workers = std::min(resolve_workers(options.workers), chunks);
  // One enumerator per worker slot; chunk c decodes to its fixed labels.
  parallel_for(chunks, workers, [&](std::size_t c) {
    detail::AssignmentEnumerator enumerator{docs, objective};
    std::vector<TopicId> fixed(prefix);
    std::size_t code = c;
    for (std::size_t j = 0; j < prefix; ++j) {
      fixed[j] = static_cast<TopicId>(code % num_topics);
      code /= num_topics;
    }
    partial[c] = enumerator.sum_with_prefix(fixed);
  });
  LogSumAccumulator total;
  for (const auto& p : partial) {
    total.merge(p);
  }
  return total.value();
}

/// Exact log marginal likelihood of the documents under LDA with topics integrated out.
inline double exact_marginal_likelihood(std::span<const Document> docs, const Hyperparams& hyper,
                                        const ExactOptions& options = {}) {
  return exact_log_sum(docs, Objective::marginal(hyper), options);
}

/// Exact log teaching numerator: Dirichlet density of every topic plus the fixed-topic likelihood sum.
inline double exact_teaching_numerator(std::span<const Document> docs, const TopicModel& model,
                                       const Hyperparams& hyper, const ExactOptions& options = {}) {
  const auto objective = Objective::likelihood(model, hyper);
  const double prior = objective.log_topic_prior();
  return prior + exact_log_sum(docs, objective, options);
}

/// Exact log numerator for teaching only the listed topics; the other topics are integrated out.
inline double exact_subset_numerator(std::span<const Document> docs, const TopicModel& model,
                                     std::span<const TopicId> subset, const Hyperparams& hyper,
                                     const ExactOptions& options = {}) {
  const auto objective = Objective::subset(model, subset, hyper);
  const double prior = objective.log_topic_prior();
  return prior + exact_log_sum(docs, objective, options);
}

/// A space of document sets: `num_docs` documents of `doc_length` words over `vocab_size` words,
/// each represented by its count vector.
struct DocSpaceSpec {
  std::size_t num_docs = 1;
  std::size_t doc_length = 1;
  std::size_t vocab_size = 1;

  /// C(doc_length + W - 1, W - 1) count vectors per document.
  [[nodiscard]] double count_vectors_per_doc() const noexcept {
    const double k = static_cast<double>(vocab_size) - 1.0;
    const double n = static_cast<double>(doc_length) + k;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
  }

  [[nodiscard]] double size() const noexcept {
    return std::pow(count_vectors_per_doc(), static_cast<double>(num_docs));
  }
};

/// How each count vector is weighted when normalizing over the space.
enum class DocWeighting {
  /// One token sequence per count vector.
  sequence,
  /// Every ordering of the multiset: the sequence score times the multinomial coefficient.
  multiset,
};

struct ExactTeachingEntry {
  /// Count vector of each document in the set.
  std::vector<std::vector<Count>> counts;
  /// Unnormalized log teaching score (numerator minus denominator, plus log weighting).
  double log_teaching = 0.0;
  /// Unnormalized log likelihood under the fixed topics (plus log weighting).
  double log_likelihood = 0.0;
  double teaching = 0.0;
  double likelihood = 0.0;

  [[nodiscard]] double difference() const noexcept { return teaching - likelihood; }
};

struct ExactTeachingTable {
  std::vector<ExactTeachingEntry> entries;
  double log_normalizer = 0.0;
  double log_likelihood_normalizer = 0.0;
  std::size_t doc_length = 0;
  DocWeighting weighting = DocWeighting::sequence;
};

/// Every count vector of length `vocab_size` summing to `total`, in lexicographically descending order.
inline std::vector<std::vector<Count>> enumerate_count_vectors(std::size_t total, std::size_t vocab_size) {
  std::vector<std::vector<Count>> out;
  std::vector<Count> current(vocab_size, 0);
  auto recurse = [&](auto&& self, std::size_t position, Count remaining) -> void {
    if (position + 1 == vocab_size) {
      current[position] = remaining;
      out.push_back(current);
      return;
    }
    for (Count c = remaining; c >= 0; --c) {
      current[position] = c;
      self(self, position + 1, remaining - c);
    }
  };
  if (vocab_size > 0) {
    recurse(recurse, 0, static_cast<Count>(total));
  }
  return out;
}

/// Sorted token sequence with the given counts.
inline Document representative_document(std::span<const Count> counts) {
  Document doc;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    doc.tokens.insert(doc.tokens.end(), static_cast<std::size_t>(counts[w]), static_cast<WordId>(w));
  }
  return doc;
}

/// log of n! / prod_w c_w!.
inline double log_multinomial_coefficient(std::span<const Count> counts) {
  double n = 0.0;
  double result = 0.0;
  for (Count c : counts) {
    n += static_cast<double>(c);
    result -= std::lgamma(static_cast<double>(c) + 1.0);
  }
  return result + std::lgamma(n + 1.0);
}

struct ExactTableOptions {
  ExactOptions exact;
  DocWeighting weighting = DocWeighting::sequence;
  /// Teach only these topics when set.
  std::optional<std::vector<TopicId>> subset;
};

/// Exact normalized teaching and likelihood distributions over a document space.
inline ExactTeachingTable exact_teaching_distribution(const DocSpaceSpec& space, const TopicModel& model,
                                                      const Hyperparams& hyper,
                                                      const ExactTableOptions& options = {}) {
  if (space.num_docs == 0 || space.doc_length == 0 || space.vocab_size == 0) {
    throw ParameterError{"document space dimensions must be positive"};
  }
  if (space.vocab_size != hyper.vocab_size()) {
    throw ParameterError{"document space vocabulary differs from hyperparameters"};
  }
  const double space_size = space.size();
  if (space_size > options.exact.doc_space_budget) {
    throw GuardError{"document space too large", space_size, options.exact.doc_space_budget};
  }
  detail::check_assignment_budget(hyper.num_topics(), space.num_docs * space.doc_length,
                                  options.exact.assignment_budget);

  const auto likelihood_objective = Objective::likelihood(model, hyper);
  const auto numerator_objective =
      options.subset ? Objective::subset(model, *options.subset, hyper) : likelihood_objective;
  const auto marginal_objective = Objective::marginal(hyper);
  const double prior = numerator_objective.log_topic_prior();

  const auto per_doc = enumerate_count_vectors(space.doc_length, space.vocab_size);
  const auto size = static_cast<std::size_t>(space_size);

  ExactTeachingTable table;
  table.doc_length = space.doc_length;
  table.weighting = options.weighting;
  table.entries.resize(size);

  ExactOptions inner = options.exact;
  inner.workers = 1;
  parallel_for(size, options.exact.workers, [&](std::size_t index) {
    auto& entry = table.entries[index];
    std::vector<Document> docs;
    double log_weight = 0.0;
    std::size_t code = index;
    for (std::size_t d = 0; d < space.num_docs; ++d) {
      const auto& counts = per_doc[code % per_doc.size()];
      code /= per_doc.size();
      entry.counts.push_back(counts);
      docs.push_back(representative_document(counts));
      if (options.weighting == DocWeighting::multiset) {
        log_weight += log_multinomial_coefficient(counts);
      }
    }
    const double log_likelihood = exact_log_sum(docs, likelihood_objective, inner);
    const double log_numerator =
        options.subset ? prior + exact_log_sum(docs, numerator_objective, inner) : prior + log_likelihood;
    const double log_denominator = exact_log_sum(docs, marginal_objective, inner);
    entry.log_teaching = log_numerator - log_denominator + log_weight;
    entry.log_likelihood = log_likelihood + log_weight;
  });

  std::vector<double> log_teaching(size);
  std::vector<double> log_likelihood(size);
  for (std::size_t i = 0; i < size; ++i) {
    log_teaching[i] = table.entries[i].log_teaching;
    log_likelihood[i] = table.entries[i].log_likelihood;
  }
  table.log_normalizer = log_sum_exp(log_teaching);
  table.log_likelihood_normalizer = log_sum_exp(log_likelihood);
  const auto teaching = normalize_log(log_teaching);
  const auto likelihood = normalize_log(log_likelihood);
  for (std::size_t i = 0; i < size; ++i) {
    table.entries[i].teaching = teaching[i];
    table.entries[i].likelihood = likelihood[i];
  }
  return table;
}

/// CSV with counts, barycenter coordinates, teaching and likelihood probabilities and their difference.
inline void write_exact_table_csv(std::ostream& out, const ExactTeachingTable& table) {
  if (table.entries.empty()) {
    return;
  }
  const std::size_t num_docs = table.entries.front().counts.size();
  const std::size_t vocab_size = table.entries.front().counts.front().size();
  for (std::size_t d = 0; d < num_docs; ++d) {
    for (std::size_t w = 0; w < vocab_size; ++w) {
      out << "d" << d << "_count_" << w << ',';
    }
    for (std::size_t w = 0; w < vocab_size; ++w) {
      out << "d" << d << "_bary_" << w << ',';
    }
  }
  out << "teaching,likelihood,difference,log_teaching,log_likelihood\n";
  const double length = static_cast<double>(table.doc_length);
  for (const auto& e : table.entries) {
    for (const auto& counts : e.counts) {
      for (Count c : counts) {
        out << c << ',';
      }
      for (Count c : counts) {
        out << format_double(static_cast<double>(c) / length) << ',';
      }
    }
    out << format_double(e.teaching) << ',' << format_double(e.likelihood) << ',' << format_double(e.difference())
        << ',' << format_double(e.log_teaching) << ',' << format_double(e.log_likelihood) << '\n';
  }
}

}  // namespace topicteach

#endif  // TOPICTEACH_EXACT_HPP
