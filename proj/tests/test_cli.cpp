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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("topicteach_cli_" + std::string{::testing::UnitTest::GetInstance()->current_test_info()->name()});
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  /// Runs the tool with `args` inside the scratch directory and returns its exit status.
  int run(const std::string& args) const {
    const std::string command =
        "cd '" + dir_.string() + "' && '" + TOPICTEACH_CLI_PATH + "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out{dir_ / name};
    out << content;
  }

  [[nodiscard]] std::string read(const std::string& name) const {
    std::ifstream in{dir_ / name, std::ios::binary};
    return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
  }

  [[nodiscard]] bool exists(const std::string& name) const { return fs::exists(dir_ / name); }

  void write_topics() const { write("topics.json", "[[0.8,0.1,0.1],[0.1,0.1,0.8]]"); }

  void write_raw_corpus() const {
    write("raw.jsonl",
          R"({"id":"a","title":"Apples","text":"apple pear apple fruit pear"}
{"id":"b","title":"Cars","text":"car engine wheel car road"}
{"id":"c","title":"Mixed","text":"apple car pear engine"}
{"id":"d","title":"Orchard","text":"pear apple fruit apple"}
{"id":"e","title":"Garage","text":"engine car wheel road road"}
{"id":"f","title":"Stop","text":"the of"}
)");
    write("stop.txt", "the\nof\n");
  }

  fs::path dir_;
};

TEST_F(Cli, SimplexDensityIsByteReproducible) {
  write_topics();
  const std::string args = "simplex-density --topics-file topics.json --doc-len 6 --alpha .1 --beta .1";
  ASSERT_EQ(run(args + " --out a.csv --workers 1"), 0);
  ASSERT_EQ(run(args + " --out b.csv --workers 3"), 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  EXPECT_EQ(read("a.csv").substr(0, 10), "d0_count_0");
  EXPECT_TRUE(read("stdout.txt").empty());
}

TEST_F(Cli, ManifestRecordsParameters) {
  write_topics();
  ASSERT_EQ(run("simplex-density --topics-file topics.json --doc-len 4 --alpha .1 --beta .1 --seed 9 --out t.csv"), 0);
  ASSERT_TRUE(exists("t.csv.manifest.json"));
  const auto manifest = nlohmann::json::parse(read("t.csv.manifest.json"));
  EXPECT_EQ(manifest["command"], "simplex-density");
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["parameters"]["doc-len"], "4");
  EXPECT_EQ(manifest["parameters"]["weighting"], "sequence");
}

TEST_F(Cli, ManifestWrittenEvenWhenRunFails) {
  write_topics();
  EXPECT_EQ(run("simplex-density --topics-file topics.json --alpha .1 --beta .1 --docs 4 --doc-len 30 --out g.csv"), 3);
  EXPECT_TRUE(exists("g.csv.manifest.json"));
}

TEST_F(Cli, ConfigurationErrors) {
  EXPECT_EQ(run("--out x.csv"), 2);
  EXPECT_EQ(run("no-such-command --out x.csv"), 2);
  EXPECT_EQ(run("simplex-density --out x.csv"), 2);
  EXPECT_EQ(run("estimator-compare --pairs 2 --bogus 1 --out x.csv"), 2);
  write("bad.json", "{not json");
  EXPECT_EQ(run("simplex-density --topics-file bad.json --alpha 1 --beta 1 --out x.csv"), 2);
  write_topics();
  EXPECT_EQ(run("simplex-density --topics-file topics.json --out x.csv"), 2);
  EXPECT_EQ(run("simplex-density --topics-file topics.json --alpha .1 --beta .1 --weighting odd --out x.csv"), 2);
  EXPECT_FALSE(read("stderr.txt").empty());
}

TEST_F(Cli, HelpExitsCleanly) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_NE(read("stdout.txt").find("scaling-bench"), std::string::npos);
}

TEST_F(Cli, EstimatorCompareRows) {
  ASSERT_EQ(run("estimator-compare --pairs 3 --samples 50 --out e.csv"), 0);
  std::istringstream in{read("e.csv")};
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "pair,quantity,proposal,exact,log_estimate,ess,log_weight_ess,relative_error");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
  }
  EXPECT_EQ(rows, 12);
  EXPECT_EQ(run("estimator-compare --pairs 1 --topics 3 --docs 4 --doc-len 10 --out big.csv"), 3);
}

TEST_F(Cli, ScalingBenchReportsNonConvergence) {
  ASSERT_EQ(run("scaling-bench --topics 3 --vocab 10 --lengths 2,4 --alpha 1 --runs 4 --batch 8 --out s.csv"), 0);
  EXPECT_EQ(read("s.csv").substr(0, read("s.csv").find('\n')),
            "n,T,alpha,beta,M_required,mean,ci95_low,ci95_high,runs,unconverged");
  EXPECT_EQ(run("scaling-bench --topics 5 --vocab 20 --lengths 30 --alpha 0.1 --runs 2 --target 1e-6 --batch 8 "
                "--max-samples 16 --out n.csv"),
            4);
  EXPECT_TRUE(exists("n.csv"));
}

TEST_F(Cli, ConfigFileSuppliesOptions) {
  write_topics();
  write("run.toml", "[simplex-density]\ntopics-file = \"topics.json\"\nalpha = 0.1\nbeta = 0.1\ndoc-len = 5\n");
  ASSERT_EQ(run("--config run.toml simplex-density --out c.csv"), 0);
  ASSERT_EQ(run("simplex-density --topics-file topics.json --alpha 0.1 --beta 0.1 --doc-len 5 --out d.csv"), 0);
  EXPECT_EQ(read("c.csv"), read("d.csv"));
}

TEST_F(Cli, FitTeachAndRankPipeline) {
  write_raw_corpus();
  ASSERT_EQ(run("fit --raw raw.jsonl --stopwords stop.txt --topics 2 --iterations 50 --corpus-out corpus.json "
                "--out model.json"),
            0);
  const auto model = nlohmann::json::parse(read("model.json"));
  EXPECT_EQ(model["format"], "topicteach-model");
  EXPECT_EQ(model["phi"].size(), 2U);
  EXPECT_EQ(model["topic_labels"].size(), 2U);

  ASSERT_EQ(run("rank --model model.json --raw raw.jsonl --stopwords stop.txt --reps 3 --samples 30 --topic 0 "
                "--out r1.csv"),
            0);
  ASSERT_EQ(run("rank --model model.json --corpus corpus.json --reps 3 --samples 30 --topic 0 --workers 2 "
                "--out r2.csv"),
            0);
  EXPECT_EQ(read("r1.csv"), read("r2.csv"));
  EXPECT_NE(read("stderr.txt").find("skipped empty document 'f'"), std::string::npos);
  EXPECT_EQ(run("rank --model model.json --corpus corpus.json --topic nosuch --out r3.csv"), 2);

  ASSERT_EQ(run("teach --topics-file model.json --doc-len 4 --steps 20 --mode exact --out chain.jsonl"), 0);
  std::istringstream chain{read("chain.jsonl")};
  std::string line;
  int lines = 0;
  while (std::getline(chain, line)) {
    const auto record = nlohmann::json::parse(line);
    EXPECT_EQ(record["step"], lines);
    ++lines;
  }
  EXPECT_EQ(lines, 21);
}

TEST_F(Cli, LearnerErrorRecords) {
  write("truth.json", "[[0.45,0.45,0.05,0.05],[0.05,0.05,0.45,0.45]]");
  const std::string args =
      "learner-error --topics-file truth.json --alpha .1 --beta .1 --doc-counts 1,2 --doc-len 6 --reps 2 "
      "--gibbs-iters 20 --burn-in 5 --samples 10";
  ASSERT_EQ(run(args + " --out a.csv"), 0);
  ASSERT_EQ(run(args + " --workers 2 --out b.csv"), 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  std::istringstream in{read("a.csv")};
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) {
    ++rows;
  }
  EXPECT_EQ(rows, 8);
}

}  // namespace
