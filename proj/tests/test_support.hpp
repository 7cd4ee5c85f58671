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

#ifndef TOPICTEACH_TESTS_TEST_SUPPORT_HPP
#define TOPICTEACH_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <topicteach/exact.hpp>
#include <topicteach/log_math.hpp>
#include <topicteach/model.hpp>
#include <topicteach/objective.hpp>
#include <topicteach/random.hpp>

namespace topicteach::testing {

/// A small random problem: hyperparameters, a target model and documents.
struct Instance {
  Hyperparams hyper;
  TopicModel model;
  std::vector<Document> docs;
};

/// Random instance with n <= max_tokens, T <= max_topics, W <= max_vocab.
inline Instance random_instance(std::uint64_t seed, std::size_t max_tokens = 8, std::size_t max_topics = 3,
                                std::size_t max_vocab = 5) {
  auto rng = make_rng(seed);
  const std::size_t num_topics = 1 + uniform_index(max_topics, rng);
  const std::size_t vocab = 2 + uniform_index(max_vocab - 1, rng);
  const std::size_t num_docs = 1 + uniform_index(2, rng);
  const double alpha = 0.2 + 1.8 * uniform01(rng);
  const double beta = 0.2 + 1.8 * uniform01(rng);
  Instance inst;
  inst.hyper = Hyperparams::symmetric(num_topics, vocab, alpha, beta);
  const std::size_t total = 2 + uniform_index(max_tokens - 1, rng);
  std::vector<std::size_t> lengths(num_docs, total / num_docs);
  lengths[0] += total % num_docs;
  auto sample = sample_generative(inst.hyper, lengths, rng());
  inst.model = sample.model;
  inst.docs = sample.corpus.documents;
  return inst;
}

/// Brute-force log sum over assignments, each term evaluated from scratch with log_dircat.
/**
 * Deliberately shares nothing with the incremental enumerator beyond log_objective_term.
 */
inline double naive_log_sum(const std::vector<Document>& docs, const Objective& objective) {
  std::vector<std::vector<TopicId>> z(docs.size());
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].assign(docs[d].size(), 0);
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      slots.emplace_back(d, i);
    }
  }
  std::vector<double> terms;
  const auto num_topics = static_cast<TopicId>(objective.num_topics());
  while (true) {
    terms.push_back(log_objective_term(docs, z, objective));
    std::size_t k = 0;
    for (; k < slots.size(); ++k) {
      auto& label = z[slots[k].first][slots[k].second];
      if (++label < num_topics) {
        break;
      }
      label = 0;
    }
    if (k == slots.size()) {
      break;
    }
  }
  return log_sum_exp(terms);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    s += x;
  }
  return s / static_cast<double>(v.size());
}

/// Standard error of the mean.
inline double standard_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) {
    s += (x - m) * (x - m);
  }
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) {
    s += (x - m) * (x - m);
  }
  return s / static_cast<double>(v.size() - 1);
}

/// Accumulates visited document sets by their count vectors.
class CountHistogram {
 public:
  explicit CountHistogram(std::size_t vocab_size) : vocab_size_{vocab_size} {}

  void add(const std::vector<Document>& docs) {
    std::vector<std::vector<Count>> key;
    for (const auto& d : docs) {
      key.push_back(d.counts(vocab_size_));
    }
    ++visits_[key];
    ++total_;
  }

  /// Total variation distance to the teaching column of `table`.
  [[nodiscard]] double total_variation(const ExactTeachingTable& table) const {
    double tv = 0.0;
    for (const auto& e : table.entries) {
      const auto it = visits_.find(e.counts);
      const double freq = it == visits_.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total_);
      tv += std::abs(freq - e.teaching);
    }
    return 0.5 * tv;
  }

 private:
  std::size_t vocab_size_;
  std::map<std::vector<std::vector<Count>>, std::size_t> visits_;
  std::size_t total_ = 0;
};

inline Document make_doc(std::vector<WordId> tokens) {
  Document d;
  d.tokens = std::move(tokens);
  return d;
}

}  // namespace topicteach::testing

#endif  // TOPICTEACH_TESTS_TEST_SUPPORT_HPP
