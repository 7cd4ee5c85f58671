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

// Command-line front end: fitting, estimator studies, exact teaching tables, teaching chains and
// document rankings. Results go to --out; a manifest of every parameter is written next to it
// before any computation starts. Progress goes to standard error.

#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <topicteach/topicteach.hpp>

namespace {

using namespace topicteach;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitNonConvergence = 4;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::size_t workers = 0;
};

void add_common(CLI::App& sub, Common& common) {
  sub.add_option("--seed", common.seed, "Master seed");
  sub.add_option("--out", common.out, "Output file")->required();
  sub.add_option("--workers", common.workers, "Worker threads (0 = all cores); results do not depend on it");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out{path, std::ios::binary};
  if (!out) {
    throw std::runtime_error{"cannot open '" + path + "' for writing"};
  }
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) {
    throw ParameterError{"cannot open '" + path + "'"};
  }
  return in;
}

void write_manifest(const CLI::App& sub, const Common& common) {
  nlohmann::json params = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help") {
      continue;
    }
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        params[names.front()] = results.front();
      } else {
        params[names.front()] = results;
      }
    } else {
      params[names.front()] = opt->get_default_str();
    }
  }
  nlohmann::json manifest;
  manifest["format"] = "topicteach-manifest";
  manifest["format_version"] = kFormatVersion;
  manifest["version"] = kVersion;
  manifest["command"] = sub.get_name();
  manifest["seed"] = common.seed;
  manifest["parameters"] = params;
  auto out = open_output(common.out + ".manifest.json");
  out << manifest.dump(2) << '\n';
}

ProposalKind parse_proposal(const std::string& name) {
  if (name == "sis") {
    return ProposalKind::sequential;
  }
  if (name == "uniform") {
    return ProposalKind::uniform;
  }
  throw ParameterError{"unknown proposal '" + name + "'"};
}

ScoreMode parse_mode(const std::string& name) {
  if (name == "estimated") {
    return ScoreMode::estimated;
  }
  if (name == "exact") {
    return ScoreMode::exact;
  }
  if (name == "auto") {
    return ScoreMode::exact_if_feasible;
  }
  throw ParameterError{"unknown score mode '" + name + "'"};
}

/// Topics from a model file, or from a bare JSON array of rows with the prior given by flags.
ModelFile load_topics(const std::string& path, std::optional<double> alpha, std::optional<double> beta) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError{"topics file: " + std::string{e.what()}};
  }
  ModelFile file;
  if (j.is_array()) {
    try {
      file.model = TopicModel::from_rows(j.get<std::vector<std::vector<double>>>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError{"topics file: " + std::string{e.what()}};
    }
    if (!alpha || !beta) {
      throw ParameterError{"--alpha and --beta are required with a bare topics array"};
    }
  } else {
    std::istringstream again{j.dump()};
    file = read_model(again);
  }
  if (alpha || beta) {
    const double a = alpha.value_or(file.hyper.alpha.empty() ? 1.0 : file.hyper.alpha.front());
    const double b = beta.value_or(file.hyper.beta.empty() ? 1.0 : file.hyper.beta.front());
    file.hyper = Hyperparams::symmetric(file.model.num_topics(), file.model.vocab_size(), a, b);
  }
  file.hyper.validate();
  file.model.validate();
  return file;
}

std::optional<SubsetSpec> resolve_subset(const ModelFile& file, const std::vector<std::string>& names) {
  if (names.empty()) {
    return std::nullopt;
  }
  SubsetSpec subset;
  for (const auto& n : names) {
    subset.target_topics.push_back(file.topic_index(n));
  }
  subset.validate(file.model.num_topics());
  return subset;
}

/// Labels each topic by its most probable word, made unique by appending the topic index.
std::vector<std::string> topic_labels(const TopicModel& model, const Vocabulary& vocabulary) {
  std::vector<std::string> labels;
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    const auto row = model.phi.row(t);
    const auto best = static_cast<WordId>(std::max_element(row.begin(), row.end()) - row.begin());
    labels.push_back(vocabulary.word(best));
  }
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (std::count(labels.begin(), labels.end(), labels[t]) > 1) {
      labels[t] += "#" + std::to_string(t);
    }
  }
  return labels;
}

// ---------------------------------------------------------------------------------------------

struct FitArgs {
  std::string raw;
  std::string corpus;
  std::string stopwords;
  std::string corpus_out;
  std::size_t min_count = 1;
  std::size_t topics = 0;
  std::optional<double> alpha;
  double beta = 0.1;
  std::size_t iterations = 1000;
};

int run_fit(const FitArgs& args, const Common& common) {
  if (args.raw.empty() == args.corpus.empty()) {
    throw ParameterError{"exactly one of --raw and --corpus is required"};
  }
  Corpus corpus;
  if (!args.raw.empty()) {
    auto in = open_input(args.raw);
    PreprocessConfig config;
    config.min_count = args.min_count;
    if (!args.stopwords.empty()) {
      auto stop = open_input(args.stopwords);
      config.stopwords = read_stopwords(stop);
    }
    auto result = preprocess(read_raw_corpus(in), config);
    corpus = std::move(result.corpus);
    std::cerr << "fit: W=" << corpus.vocabulary.size() << " n=" << corpus.total_words()
              << " D=" << corpus.documents.size() << " (" << result.empty_documents.size() << " empty)\n";
    if (!args.corpus_out.empty()) {
      auto out = open_output(args.corpus_out);
      write_corpus(out, corpus);
    }
  } else {
    auto in = open_input(args.corpus);
    corpus = read_corpus(in);
  }
  if (args.topics < 1) {
    throw ParameterError{"--topics must be at least 1"};
  }
  const double alpha = args.alpha.value_or(50.0 / static_cast<double>(args.topics));
  const auto hyper = Hyperparams::symmetric(args.topics, corpus.vocabulary.size(), alpha, args.beta);
  const std::size_t every = std::max<std::size_t>(1, args.iterations / 10);
  const auto fit = gibbs_fit(corpus.documents, hyper, args.iterations, common.seed,
                             [&](std::size_t it, const AssignmentState&) {
                               if ((it + 1) % every == 0) {
                                 std::cerr << "fit: sweep " << (it + 1) << '/' << args.iterations << '\n';
                               }
                             });
  ModelFile file;
  file.model = fit.model;
  file.hyper = hyper;
  const auto words = corpus.vocabulary.words();
  file.vocabulary.assign(words.begin(), words.end());
  file.topic_labels = topic_labels(fit.model, corpus.vocabulary);
  auto out = open_output(common.out);
  write_model(out, file);
  return kExitOk;
}

struct CompareArgs {
  std::size_t pairs = 512;
  std::size_t samples = 1000;
  std::size_t topics = 3;
  std::size_t vocab = 5;
  std::size_t docs = 2;
  std::size_t doc_len = 5;
  double alpha = 0.5;
  double beta = 0.5;
};

int run_compare(const CompareArgs& args, const Common& common) {
  EstimatorCompareConfig config;
  config.hyper = Hyperparams::symmetric(args.topics, args.vocab, args.alpha, args.beta);
  config.docs = args.docs;
  config.doc_length = args.doc_len;
  config.pairs = args.pairs;
  config.samples = args.samples;
  config.workers = common.workers;
  const auto records = estimator_compare(config, common.seed);
  auto out = open_output(common.out);
  write_estimator_compare_csv(out, records);
  for (Quantity q : {Quantity::marginal, Quantity::numerator}) {
    for (ProposalKind k : {ProposalKind::uniform, ProposalKind::sequential}) {
      double ess = 0.0;
      double lw_ess = 0.0;
      std::size_t n = 0;
      for (const auto& r : records) {
        if (r.quantity == q && r.kind == k) {
          ess += r.ess;
          lw_ess += r.log_weight_ess;
          ++n;
        }
      }
      std::cerr << "estimator-compare: " << to_string(q) << ' ' << to_string(k) << " mean ESS " << ess / n
                << ", log-weight ESS " << lw_ess / n << '\n';
    }
  }
  return kExitOk;
}

struct ScalingArgs {
  std::size_t topics = 20;
  std::size_t vocab = 100;
  std::vector<std::size_t> lengths{10, 20, 40, 60};
  std::vector<double> alphas{0.1, 1.0};
  std::vector<double> betas;
  std::size_t runs = 128;
  double target = 0.05;
  std::size_t batch = 32;
  std::size_t max_samples = std::size_t{1} << 20;
  std::string proposal = "sis";
};

int run_scaling(const ScalingArgs& args, const Common& common) {
  const auto& betas = args.betas.empty() ? args.alphas : args.betas;
  if (betas.size() != args.alphas.size()) {
    throw ParameterError{"--beta must list as many values as --alpha"};
  }
  ScalingConfig config;
  config.num_topics = args.topics;
  config.vocab_size = args.vocab;
  config.lengths = args.lengths;
  config.priors.clear();
  for (std::size_t i = 0; i < args.alphas.size(); ++i) {
    config.priors.emplace_back(args.alphas[i], betas[i]);
  }
  config.runs = args.runs;
  config.target = TargetConfig{args.target, args.batch, args.max_samples};
  config.kind = parse_proposal(args.proposal);
  config.workers = common.workers;
  const auto cells = scaling_bench(config, common.seed);
  auto out = open_output(common.out);
  write_scaling_csv(out, cells);
  std::size_t unconverged = 0;
  for (const auto& c : cells) {
    std::cerr << "scaling-bench: n=" << c.length << " alpha=" << c.alpha << " beta=" << c.beta << " mean M "
              << c.mean() << '\n';
    unconverged += c.unconverged;
  }
  if (unconverged > 0) {
    std::cerr << "scaling-bench: " << unconverged << " runs hit --max-samples before reaching the target\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

struct TopicArgs {
  std::string topics_file;
  std::optional<double> alpha;
  std::optional<double> beta;
};

void add_topic_args(CLI::App& sub, TopicArgs& args, bool required) {
  auto* opt = sub.add_option("--topics-file", args.topics_file, "Model file or JSON array of topic rows");
  if (required) {
    opt->required();
  }
  sub.add_option("--alpha", args.alpha, "Symmetric document-topic concentration (overrides the file)");
  sub.add_option("--beta", args.beta, "Symmetric topic-word concentration (overrides the file)");
}

struct SimplexArgs {
  TopicArgs topics;
  std::size_t docs = 1;
  std::size_t doc_len = 10;
  std::string weighting = "sequence";
  std::vector<std::string> subset;
};

int run_simplex(const SimplexArgs& args, const Common& common) {
  const auto file = load_topics(args.topics.topics_file, args.topics.alpha, args.topics.beta);
  ExactTableOptions options;
  options.exact.workers = common.workers;
  if (args.weighting == "sequence") {
    options.weighting = DocWeighting::sequence;
  } else if (args.weighting == "multiset") {
    options.weighting = DocWeighting::multiset;
  } else {
    throw ParameterError{"unknown weighting '" + args.weighting + "'"};
  }
  if (const auto subset = resolve_subset(file, args.subset)) {
    options.subset = subset->target_topics;
  }
  const auto table =
      exact_teaching_distribution({args.docs, args.doc_len, file.model.vocab_size()}, file.model, file.hyper, options);
  auto out = open_output(common.out);
  write_exact_table_csv(out, table);
  return kExitOk;
}

struct LearnerArgs {
  TopicArgs topics;
  std::vector<std::size_t> doc_counts{1, 2, 3, 4};
  std::size_t doc_len = 20;
  std::size_t reps = 64;
  std::size_t gibbs_iters = 1000;
  std::size_t burn_in = 500;
  std::size_t samples = 100;
  std::size_t flips = 0;
  std::string proposal = "sis";
};

int run_learner(const LearnerArgs& args, const Common& common) {
  const auto file = load_topics(args.topics.topics_file, args.topics.alpha, args.topics.beta);
  ExperimentConfig config;
  config.true_model = file.model;
  config.hyper = file.hyper;
  config.doc_counts = args.doc_counts;
  config.doc_length = args.doc_len;
  config.replications = args.reps;
  config.gibbs_iterations = args.gibbs_iters;
  config.burn_in = args.burn_in;
  config.proposal.flips = args.flips;
  config.score.estimator.samples = args.samples;
  config.score.estimator.kind = parse_proposal(args.proposal);
  config.seed = common.seed;
  config.workers = common.workers;
  std::cerr << "learner-error: " << args.doc_counts.size() * args.reps << " cells\n";
  const auto records = run_learning_experiment(config);
  auto out = open_output(common.out);
  write_error_records_csv(out, records);
  return kExitOk;
}

struct TeachArgs {
  TopicArgs topics;
  std::vector<std::string> subset;
  std::string init;
  std::size_t docs = 1;
  std::size_t doc_len = 20;
  std::size_t steps = 10000;
  std::size_t samples = 1000;
  std::size_t flips = 0;
  std::string mode = "estimated";
  std::string proposal = "sis";
  bool refresh_incumbent = false;
};

int run_teach(const TeachArgs& args, const Common& common) {
  const auto file = load_topics(args.topics.topics_file, args.topics.alpha, args.topics.beta);
  std::vector<Document> initial;
  if (!args.init.empty()) {
    auto in = open_input(args.init);
    initial = read_corpus(in).documents;
  } else {
    const std::vector<std::size_t> lengths(args.docs, args.doc_len);
    initial = sample_documents(file.model, file.hyper, lengths, derive_seed(common.seed, {0})).corpus.documents;
  }
  ScoreConfig score;
  score.mode = parse_mode(args.mode);
  score.estimator.samples = args.samples;
  score.estimator.kind = parse_proposal(args.proposal);
  score.estimator.workers = common.workers;
  score.exact.workers = common.workers;
  ChainOptions options;
  options.refresh_incumbent = args.refresh_incumbent;
  auto out = open_output(common.out);
  const std::size_t every = std::max<std::size_t>(1, args.steps / 10);
  std::size_t accepted = 0;
  run_pmmh(
      initial, make_teaching_scorer(file.model, resolve_subset(file, args.subset), file.hyper, score),
      file.hyper.vocab_size(), ProposalConfig{args.flips}, args.steps, derive_seed(common.seed, {1}),
      [&](const ChainState& s) {
        write_chain_record(out, s, file.hyper.vocab_size());
        accepted += s.accepted ? 1 : 0;
        if (s.step > 0 && s.step % every == 0) {
          std::cerr << "teach: step " << s.step << '/' << args.steps << ", acceptance "
                    << static_cast<double>(accepted) / static_cast<double>(s.step) << '\n';
        }
      },
      options);
  return kExitOk;
}

struct RankArgs {
  std::string model;
  std::string corpus;
  std::string raw;
  std::string stopwords;
  std::vector<std::string> topic;
  std::size_t reps = 16;
  std::size_t samples = 1000;
  std::string mode = "estimated";
  std::string proposal = "sis";
  std::optional<double> cosine_quantile;
};

/// Re-indexes tokens into the model's vocabulary, dropping words the model does not know.
std::vector<Document> to_model_vocabulary(const Corpus& corpus, const ModelFile& file) {
  if (file.vocabulary.empty()) {
    validate_documents(corpus.documents, file.model.vocab_size());
    return corpus.documents;
  }
  Vocabulary model_vocab;
  for (const auto& w : file.vocabulary) {
    model_vocab.add(w);
  }
  std::vector<Document> docs;
  for (const auto& d : corpus.documents) {
    Document mapped;
    mapped.id = d.id;
    mapped.title = d.title;
    for (WordId w : d.tokens) {
      if (const auto id = model_vocab.find(corpus.vocabulary.word(w))) {
        mapped.tokens.push_back(*id);
      }
    }
    docs.push_back(std::move(mapped));
  }
  return docs;
}

int run_rank(const RankArgs& args, const Common& common) {
  if (args.raw.empty() == args.corpus.empty()) {
    throw ParameterError{"exactly one of --raw and --corpus is required"};
  }
  auto model_in = open_input(args.model);
  const auto file = read_model(model_in);
  Corpus corpus;
  if (!args.raw.empty()) {
    auto in = open_input(args.raw);
    PreprocessConfig config;
    if (!args.stopwords.empty()) {
      auto stop = open_input(args.stopwords);
      config.stopwords = read_stopwords(stop);
    }
    corpus = preprocess(read_raw_corpus(in), config).corpus;
  } else {
    auto in = open_input(args.corpus);
    corpus = read_corpus(in);
  }
  const auto docs = to_model_vocabulary(corpus, file);
  RankConfig config;
  config.reps = args.reps;
  config.score.mode = parse_mode(args.mode);
  config.score.estimator.samples = args.samples;
  config.score.estimator.kind = parse_proposal(args.proposal);
  config.subset = resolve_subset(file, args.topic);
  config.cosine_quantile = args.cosine_quantile;
  config.workers = common.workers;
  const auto result = rank_documents(docs, file.model, file.hyper, config, common.seed);
  for (const auto& id : result.skipped) {
    std::cerr << "rank: skipped empty document '" << id << "'\n";
  }
  auto out = open_output(common.out);
  write_ranking_csv(out, result.records);
  if (result.records.size() >= 2) {
    std::vector<double> teaching;
    std::vector<double> cosine;
    for (const auto& r : result.records) {
      teaching.push_back(r.mean_log_teaching);
      cosine.push_back(r.cosine_score);
    }
    std::cerr << "rank: Pearson r(teaching, cosine) = " << pearson_correlation(teaching, cosine) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian teaching for LDA topic models"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Read options from a TOML or INI file");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  Common common;

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit LDA by collapsed Gibbs sampling and write a model file");
  add_common(*fit_cmd, common);
  fit_cmd->add_option("--raw", fit.raw, "Raw corpus (JSON lines with id, title, text)");
  fit_cmd->add_option("--corpus", fit.corpus, "Preprocessed corpus file");
  fit_cmd->add_option("--stopwords", fit.stopwords, "Stopword file, one word per line");
  fit_cmd->add_option("--min-count", fit.min_count, "Drop words occurring fewer times");
  fit_cmd->add_option("--corpus-out", fit.corpus_out, "Also write the preprocessed corpus here");
  fit_cmd->add_option("--topics", fit.topics, "Number of topics")->required();
  fit_cmd->add_option("--alpha", fit.alpha, "Document-topic concentration (default 50/T)");
  fit_cmd->add_option("--beta", fit.beta, "Topic-word concentration");
  fit_cmd->add_option("--iterations", fit.iterations, "Gibbs sweeps");

  CompareArgs compare;
  auto* compare_cmd =
      app.add_subcommand("estimator-compare", "Exact, uniform and sequential estimates on sampled document sets");
  add_common(*compare_cmd, common);
  compare_cmd->add_option("--pairs", compare.pairs, "Number of sampled document sets");
  compare_cmd->add_option("--samples", compare.samples, "Importance samples per estimate");
  compare_cmd->add_option("--topics", compare.topics, "Number of topics");
  compare_cmd->add_option("--vocab", compare.vocab, "Vocabulary size");
  compare_cmd->add_option("--docs", compare.docs, "Documents per set");
  compare_cmd->add_option("--doc-len", compare.doc_len, "Words per document");
  compare_cmd->add_option("--alpha", compare.alpha, "Symmetric alpha");
  compare_cmd->add_option("--beta", compare.beta, "Symmetric beta");

  ScalingArgs scaling;
  auto* scaling_cmd =
      app.add_subcommand("scaling-bench", "Samples needed to reach a relative-error target versus document length");
  add_common(*scaling_cmd, common);
  scaling_cmd->add_option("--topics", scaling.topics, "Number of topics");
  scaling_cmd->add_option("--vocab", scaling.vocab, "Vocabulary size");
  scaling_cmd->add_option("--lengths", scaling.lengths, "Document lengths")->delimiter(',');
  scaling_cmd->add_option("--alpha", scaling.alphas, "Alpha values")->delimiter(',');
  scaling_cmd->add_option("--beta", scaling.betas, "Beta values, paired with --alpha (default: same)")->delimiter(',');
  scaling_cmd->add_option("--runs", scaling.runs, "Runs per cell");
  scaling_cmd->add_option("--target", scaling.target, "Relative sample error target");
  scaling_cmd->add_option("--batch", scaling.batch, "Samples added per batch");
  scaling_cmd->add_option("--max-samples", scaling.max_samples, "Sample cap per run");
  scaling_cmd->add_option("--proposal", scaling.proposal, "sis or uniform");

  SimplexArgs simplex;
  auto* simplex_cmd =
      app.add_subcommand("simplex-density", "Exact teaching and likelihood distributions over a document space");
  add_common(*simplex_cmd, common);
  add_topic_args(*simplex_cmd, simplex.topics, true);
  simplex_cmd->add_option("--docs", simplex.docs, "Documents per set");
  simplex_cmd->add_option("--doc-len", simplex.doc_len, "Words per document");
  simplex_cmd->add_option("--weighting", simplex.weighting, "sequence or multiset");
  simplex_cmd->add_option("--subset", simplex.subset, "Teach only these topics (labels or indices)")->delimiter(',');

  LearnerArgs learner;
  auto* learner_cmd =
      app.add_subcommand("learner-error", "Learner error after fitting on teaching versus random documents");
  add_common(*learner_cmd, common);
  add_topic_args(*learner_cmd, learner.topics, true);
  learner_cmd->add_option("--doc-counts", learner.doc_counts, "Numbers of documents")->delimiter(',');
  learner_cmd->add_option("--doc-len", learner.doc_len, "Words per document");
  learner_cmd->add_option("--reps", learner.reps, "Replications per document count");
  learner_cmd->add_option("--gibbs-iters", learner.gibbs_iters, "Gibbs sweeps per fit");
  learner_cmd->add_option("--burn-in", learner.burn_in, "Teaching chain steps");
  learner_cmd->add_option("--samples", learner.samples, "Importance samples per score estimate");
  learner_cmd->add_option("--flips", learner.flips, "Word flips per proposal (0 = 5% of tokens)");
  learner_cmd->add_option("--proposal", learner.proposal, "sis or uniform");

  TeachArgs teach;
  auto* teach_cmd = app.add_subcommand("teach", "Sample document sets from the teaching distribution");
  add_common(*teach_cmd, common);
  add_topic_args(*teach_cmd, teach.topics, true);
  teach_cmd->add_option("--subset", teach.subset, "Teach only these topics (labels or indices)")->delimiter(',');
  teach_cmd->add_option("--init", teach.init, "Start from the documents of this corpus file");
  teach_cmd->add_option("--docs", teach.docs, "Documents per set when sampling the start");
  teach_cmd->add_option("--doc-len", teach.doc_len, "Words per document when sampling the start");
  teach_cmd->add_option("--steps", teach.steps, "Chain steps");
  teach_cmd->add_option("--samples", teach.samples, "Importance samples per score estimate");
  teach_cmd->add_option("--flips", teach.flips, "Word flips per proposal (0 = 5% of tokens)");
  teach_cmd->add_option("--mode", teach.mode, "estimated, exact or auto");
  teach_cmd->add_option("--proposal", teach.proposal, "sis or uniform");
  teach_cmd->add_flag("--refresh-incumbent", teach.refresh_incumbent,
                      "Re-estimate the incumbent every step (biased; for diagnostics only)");

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank documents by teaching score");
  add_common(*rank_cmd, common);
  rank_cmd->add_option("--model", rank.model, "Model file")->required();
  rank_cmd->add_option("--corpus", rank.corpus, "Preprocessed corpus file");
  rank_cmd->add_option("--raw", rank.raw, "Raw corpus (JSON lines with id, title, text)");
  rank_cmd->add_option("--stopwords", rank.stopwords, "Stopword file for --raw");
  rank_cmd->add_option("--topic", rank.topic, "Teach only these topics (labels or indices)");
  rank_cmd->add_option("--reps", rank.reps, "Independent estimates per document");
  rank_cmd->add_option("--samples", rank.samples, "Importance samples per estimate");
  rank_cmd->add_option("--mode", rank.mode, "estimated, exact or auto");
  rank_cmd->add_option("--proposal", rank.proposal, "sis or uniform");
  rank_cmd->add_option("--cosine-quantile", rank.cosine_quantile, "Score only documents in this cosine quantile");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    write_manifest(*sub, common);
    if (sub == fit_cmd) {
      return run_fit(fit, common);
    }
    if (sub == compare_cmd) {
      return run_compare(compare, common);
    }
    if (sub == scaling_cmd) {
      return run_scaling(scaling, common);
    }
    if (sub == simplex_cmd) {
      return run_simplex(simplex, common);
    }
    if (sub == learner_cmd) {
      return run_learner(learner, common);
    }
    if (sub == teach_cmd) {
      return run_teach(teach, common);
    }
    return run_rank(rank, common);
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
