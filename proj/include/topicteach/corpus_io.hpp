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

#ifndef TOPICTEACH_CORPUS_IO_HPP
#define TOPICTEACH_CORPUS_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include <topicteach/errors.hpp>
#include <topicteach/estimators.hpp>
#include <topicteach/format.hpp>
#include <topicteach/model.hpp>
#include <topicteach/parallel.hpp>
#include <topicteach/random.hpp>
#include <topicteach/teaching.hpp>

/**
 * \file
 * \brief Corpus ingestion, model and corpus files, and per-document teaching rankings.
 */

namespace topicteach {

inline constexpr int kFormatVersion = 1;

struct RawDocument {
  std::string id;
  std::string title;
  std::string text;
};

struct PreprocessConfig {
  std::unordered_set<std::string> stopwords;
  /// Words occurring fewer times than this across the corpus are dropped.
  std::size_t min_count = 1;
  bool lowercase = true;
  /// Split on every non-alphanumeric character; otherwise split on whitespace only.
  bool strip_punctuation = true;
};

struct PreprocessResult {
  Corpus corpus;
  /// Ids of documents left with no tokens; kept in the corpus but excluded from ranking.
  std::vector<std::string> empty_documents;
};

/// Tokens of `text` after the case and punctuation rules.
inline std::vector<std::string> tokenize(std::string_view text, const PreprocessConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    const bool boundary = config.strip_punctuation ? !std::isalnum(c) : std::isspace(c) != 0;
    if (boundary) {
      flush();
    } else {
      current.push_back(config.lowercase ? static_cast<char>(std::tolower(c)) : raw);
    }
  }
  flush();
  return tokens;
}

/// Tokenize, drop stopwords, drop rare words and index the vocabulary in first-occurrence order.
inline PreprocessResult preprocess(std::span<const RawDocument> raw, const PreprocessConfig& config) {
  if (raw.empty()) {
    throw ParameterError{"no documents to preprocess"};
  }
  if (config.min_count < 1) {
    throw ParameterError{"min_count must be at least 1"};
  }
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(raw.size());
  std::unordered_map<std::string, std::size_t> frequency;
  for (const auto& doc : raw) {
    auto tokens = tokenize(doc.text, config);
    std::erase_if(tokens, [&](const std::string& t) { return config.stopwords.contains(t); });
    for (const auto& t : tokens) {
      ++frequency[t];
    }
    tokenized.push_back(std::move(tokens));
  }
  PreprocessResult result;
  for (std::size_t d = 0; d < raw.size(); ++d) {
    Document doc;
    doc.id = raw[d].id.empty() ? std::to_string(d) : raw[d].id;
    doc.title = raw[d].title;
    for (const auto& t : tokenized[d]) {
      if (frequency[t] >= config.min_count) {
        doc.tokens.push_back(result.corpus.vocabulary.add(t));
      }
    }
    if (doc.empty()) {
      result.empty_documents.push_back(doc.id);
    }
    result.corpus.documents.push_back(std::move(doc));
  }
  return result;
}

/// Raw corpus: one JSON object per line with string fields "id", "title" and "text".
inline std::vector<RawDocument> read_raw_corpus(std::istream& in) {
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(line);
      RawDocument doc;
      doc.id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump()) : "";
      doc.title = j.value("title", "");
      doc.text = j.at("text").get<std::string>();
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError{"corpus line " + std::to_string(line_number) + ": " + e.what()};
    }
  }
  return docs;
}

/// One token per line; blank lines and lines starting with '#' are ignored.
inline std::unordered_set<std::string> read_stopwords(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') {
      continue;
    }
    const auto end = line.find_last_not_of(" \t\r");
    words.insert(line.substr(begin, end - begin + 1));
  }
  return words;
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  nlohmann::json j;
  j["format"] = "topicteach-corpus";
  j["format_version"] = kFormatVersion;
  j["vocabulary"] = corpus.vocabulary.words();
  auto& docs = j["documents"] = nlohmann::json::array();
  for (const auto& d : corpus.documents) {
    docs.push_back({{"id", d.id}, {"title", d.title}, {"tokens", d.tokens}});
  }
  out << j.dump() << '\n';
}

inline Corpus read_corpus(std::istream& in) {
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.value("format", "") != "topicteach-corpus" || j.value("format_version", 0) != kFormatVersion) {
      throw FormatError{"not a topicteach corpus file (format version " + std::to_string(kFormatVersion) + ")"};
    }
    Corpus corpus;
    for (const auto& w : j.at("vocabulary")) {
      corpus.vocabulary.add(w.get<std::string>());
    }
    if (corpus.vocabulary.size() != j.at("vocabulary").size()) {
      throw FormatError{"corpus vocabulary has duplicate words"};
    }
    for (const auto& d : j.at("documents")) {
      Document doc;
      doc.id = d.value("id", std::to_string(corpus.documents.size()));
      doc.title = d.value("title", "");
      doc.tokens = d.at("tokens").get<std::vector<WordId>>();
      corpus.documents.push_back(std::move(doc));
    }
    validate_documents(corpus.documents, corpus.vocabulary.size());
    return corpus;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError{std::string{"corpus file: "} + e.what()};
  } catch (const ParameterError& e) {
    throw FormatError{std::string{"corpus file: "} + e.what()};
  }
}

/// A topic model with the prior it was fit under and optional word and topic labels.
struct ModelFile {
  TopicModel model;
  Hyperparams hyper;
  std::vector<std::string> vocabulary;
  std::vector<std::string> topic_labels;

  /// Topic index for a label or a decimal index.
  [[nodiscard]] TopicId topic_index(const std::string& name) const {
    for (std::size_t t = 0; t < topic_labels.size(); ++t) {
      if (topic_labels[t] == name) {
        return static_cast<TopicId>(t);
      }
    }
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(name, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != name.size() || pos == 0 || value >= model.num_topics()) {
      throw ParameterError{"unknown topic '" + name + "'"};
    }
    return static_cast<TopicId>(value);
  }
};

inline void write_model(std::ostream& out, const ModelFile& file) {
  nlohmann::json j;
  j["format"] = "topicteach-model";
  j["format_version"] = kFormatVersion;
  j["alpha"] = file.hyper.alpha;
  j["beta"] = file.hyper.beta;
  auto& phi = j["phi"] = nlohmann::json::array();
  for (std::size_t t = 0; t < file.model.num_topics(); ++t) {
    const auto row = file.model.phi.row(t);
    phi.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["vocabulary"] = file.vocabulary;
  j["topic_labels"] = file.topic_labels;
  out << j.dump() << '\n';
}

inline ModelFile read_model(std::istream& in) {
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.value("format", "") != "topicteach-model" || j.value("format_version", 0) != kFormatVersion) {
      throw FormatError{"not a topicteach model file (format version " + std::to_string(kFormatVersion) + ")"};
    }
    ModelFile file;
    file.model = TopicModel::from_rows(j.at("phi").get<std::vector<std::vector<double>>>());
    file.hyper.alpha = j.at("alpha").get<std::vector<double>>();
    file.hyper.beta = j.at("beta").get<std::vector<double>>();
    file.hyper.validate();
    file.vocabulary = j.value("vocabulary", std::vector<std::string>{});
    file.topic_labels = j.value("topic_labels", std::vector<std::string>{});
    if (file.hyper.num_topics() != file.model.num_topics() || file.hyper.vocab_size() != file.model.vocab_size()) {
      throw FormatError{"model file: phi shape does not match alpha/beta"};
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError{std::string{"model file: "} + e.what()};
  } catch (const ParameterError& e) {
    throw FormatError{std::string{"model file: "} + e.what()};
  }
}

/// 1 - cosine similarity between the document's word counts and `target`.
inline double cosine_teaching_heuristic(const Document& doc, std::span<const double> target) {
  if (doc.empty()) {
    throw ParameterError{"cosine heuristic: document has no tokens"};
  }
  const auto counts = doc.counts(target.size());
  double dot = 0.0;
  double doc_norm = 0.0;
  double target_norm = 0.0;
  for (std::size_t w = 0; w < target.size(); ++w) {
    const double c = static_cast<double>(counts[w]);
    dot += c * target[w];
    doc_norm += c * c;
    target_norm += target[w] * target[w];
  }
  if (target_norm == 0.0) {
    throw ParameterError{"cosine heuristic: target vector is zero"};
  }
  const double similarity = dot / (std::sqrt(doc_norm) * std::sqrt(target_norm));
  return 1.0 - std::clamp(similarity, -1.0, 1.0);
}

/// Normalized sum of the target rows (all rows when no subset is given).
inline std::vector<double> cosine_target(const TopicModel& model, const std::optional<SubsetSpec>& subset) {
  std::vector<double> target(model.vocab_size(), 0.0);
  auto add_row = [&](std::size_t t) {
    for (std::size_t w = 0; w < target.size(); ++w) {
      target[w] += model.phi(t, w);
    }
  };
  if (subset) {
    subset->validate(model.num_topics());
    for (TopicId t : subset->target_topics) {
      add_row(t);
    }
  } else {
    for (std::size_t t = 0; t < model.num_topics(); ++t) {
      add_row(t);
    }
  }
  double total = 0.0;
  for (double v : target) {
    total += v;
  }
  for (double& v : target) {
    v /= total;
  }
  return target;
}

struct RankingRecord {
  std::string id;
  std::string title;
  double mean_log_teaching = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  double per_word_log_likelihood = 0.0;
  double cosine_score = 0.0;
};

struct RankConfig {
  std::size_t reps = 16;
  ScoreConfig score;
  std::optional<SubsetSpec> subset;
  /// Score only documents whose cosine score is at or below this quantile, when set.
  std::optional<double> cosine_quantile;
  /// Parallelism across documents; 0 means all cores.
  std::size_t workers = 1;
};

struct RankingResult {
  std::vector<RankingRecord> records;
  /// Ids of zero-length documents that were not ranked.
  std::vector<std::string> skipped;
};

/// Per-document teaching scores, length-adjusted likelihoods and cosine scores, best first.
/**
 * Every document gets `reps` independent teaching-score estimates keyed by (seed, document id,
 * rep); records carry their mean and standard error. The per-word log likelihood is the estimated
 * log likelihood under the full topic model divided by the document length. Ties in the mean score
 * are broken by document id, so the ranking does not depend on input order.
 */
inline RankingResult rank_documents(std::span<const Document> docs, const TopicModel& model, const Hyperparams& hyper,
                                    const RankConfig& config, std::uint64_t seed) {
  if (config.reps < 1) {
    throw ParameterError{"reps must be at least 1"};
  }
  if (config.cosine_quantile && !(*config.cosine_quantile > 0.0 && *config.cosine_quantile <= 1.0)) {
    throw ParameterError{"cosine quantile must lie in (0, 1]"};
  }
  validate_documents(docs, hyper.vocab_size());
  const auto target = cosine_target(model, config.subset);

  RankingResult result;
  std::vector<std::size_t> selected;
  std::vector<double> cosine(docs.size(), 0.0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (docs[d].empty()) {
      result.skipped.push_back(docs[d].id);
      continue;
    }
    cosine[d] = cosine_teaching_heuristic(docs[d], target);
    selected.push_back(d);
  }
  if (config.cosine_quantile && !selected.empty()) {
    std::vector<double> scores;
    for (std::size_t d : selected) {
      scores.push_back(cosine[d]);
    }
    std::sort(scores.begin(), scores.end());
    const auto cut_index = static_cast<std::size_t>(
        std::ceil(*config.cosine_quantile * static_cast<double>(scores.size())) - 1.0);
    const double cut = scores[std::min(cut_index, scores.size() - 1)];
    std::erase_if(selected, [&](std::size_t d) { return cosine[d] > cut; });
  }

  const auto numerator =
      config.subset ? Objective::subset(model, config.subset->target_topics, hyper) : Objective::likelihood(model, hyper);
  const auto likelihood = Objective::likelihood(model, hyper);
  ScoreConfig inner = config.score;
  inner.estimator.workers = 1;

  result.records.resize(selected.size());
  parallel_for(selected.size(), config.workers, [&](std::size_t k) {
    const auto& doc = docs[selected[k]];
    const std::span<const Document> one{&doc, 1};
    const std::uint64_t key = stable_hash(doc.id);
    std::vector<double> scores(config.reps);
    for (std::size_t r = 0; r < config.reps; ++r) {
      scores[r] = detail::score_with(one, numerator, hyper, inner, derive_seed(seed, {key, r, 0})).log_score;
    }
    double mean = 0.0;
    for (double s : scores) {
      mean += s;
    }
    mean /= static_cast<double>(config.reps);
    double variance = 0.0;
    for (double s : scores) {
      variance += (s - mean) * (s - mean);
    }
    const double std_error =
        config.reps > 1 ? std::sqrt(variance / static_cast<double>(config.reps - 1) / static_cast<double>(config.reps))
                        : 0.0;
    double log_likelihood = 0.0;
    if (detail::use_exact(inner, hyper.num_topics(), doc.size())) {
      log_likelihood = exact_log_sum(one, likelihood, inner.exact);
    } else {
      log_likelihood = estimate_log_sum(one, likelihood, inner.estimator, derive_seed(seed, {key, 0, 1})).log_estimate;
    }
    auto& record = result.records[k];
    record.id = doc.id;
    record.title = doc.title;
    record.mean_log_teaching = mean;
    record.std_error = std_error;
    record.reps = config.reps;
    record.per_word_log_likelihood = log_likelihood / static_cast<double>(doc.size());
    record.cosine_score = cosine[selected[k]];
  });

  std::sort(result.records.begin(), result.records.end(), [](const RankingRecord& a, const RankingRecord& b) {
    if (a.mean_log_teaching != b.mean_log_teaching) {
      return a.mean_log_teaching > b.mean_log_teaching;
    }
    return a.id < b.id;
  });
  return result;
}

/// Pearson correlation coefficient.
inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterError{"correlation needs two equal-length samples of size >= 2"};
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + '"';
}

}  // namespace detail

inline void write_ranking_csv(std::ostream& out, const std::vector<RankingRecord>& records) {
  out << "rank,id,title,mean_log_teaching,stderr,per_word_log_likelihood,cosine_score\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << (i + 1) << ',' << detail::csv_field(r.id) << ',' << detail::csv_field(r.title) << ','
        << format_double(r.mean_log_teaching) << ',' << format_double(r.std_error) << ','
        << format_double(r.per_word_log_likelihood) << ',' << format_double(r.cosine_score) << '\n';
  }
}

}  // namespace topicteach

#endif  // TOPICTEACH_CORPUS_IO_HPP
