// Copyright 2026 The Nextword Authors.
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

// End-to-end tests that run the command-line binary.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nextword/persistence.h"
#include "nextword/predictor.h"
#include "oracles.h"
#include "test_support.h"

namespace nextword {
namespace {

namespace fs = std::filesystem;
using ::nextword::testing::RepoData;
using ::nextword::testing::Slurp;
using ::nextword::testing::Spit;
using ::nextword::testing::TempDir;
using ::nextword::testing::TestData;
using ::testing::HasSubstr;
using ::testing::StartsWith;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the binary with `args`, capturing stdout and stderr separately.
CliResult Cli(const std::vector<std::string>& args) {
  static int counter = 0;
  const fs::path err_path = fs::temp_directory_path() /
                            ("nextword_cli_err_" + std::to_string(::getpid()) +
                             "_" + std::to_string(counter++));
  std::string command = Quote(NEXTWORD_CLI);
  for (const std::string& a : args) command += " " + Quote(a);
  command += " 2>" + Quote(err_path.string());
  CliResult run;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return run;
  char buffer[4096];
  std::size_t n;
  while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    run.out.append(buffer, n);
  }
  const int status = ::pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.err = Slurp(err_path);
  fs::remove(err_path);
  return run;
}

std::vector<std::vector<std::string>> Rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, '\t')) fields.push_back(cell);
    rows.push_back(fields);
  }
  return rows;
}

std::string Fixed6(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

const std::string kMiniModel = TestData("mini_model");

TEST(CliPredictTest, BoGivesBazarThenSeyran) {
  const CliResult run = Cli({"predict", "--model", kMiniModel, "bo"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  EXPECT_EQ(run.out, "1\tbazar\t0.666667\t2\n2\tseyran\t0.333333\t2\n");
}

TEST(CliPredictTest, KOneGivesASingleLine) {
  const CliResult run = Cli({"predict", "--model", kMiniModel, "--k", "1", "ew"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  EXPECT_EQ(Rows(run.out).size(), 1u);
}

TEST(CliPredictTest, OutputParsesBackToTheLibraryResult) {
  const LoadedModel loaded = LoadModel(kMiniModel);
  for (const std::string text : {"", "ew", "Ewan çûn bo", "zz", "bo bazar"}) {
    for (const std::string k : {"1", "3", "7"}) {
      std::vector<std::string> args = {"predict", "--model", kMiniModel,
                                       "--k", k};
      if (!text.empty()) args.push_back(text);
      const CliResult run = Cli(args);
      ASSERT_EQ(run.exit_code, 0) << run.err;
      PredictionRequest request;
      request.context_text = text;
      request.k = std::stoul(k);
      const std::vector<Suggestion> want = Predict(loaded.engine, request);
      const auto rows = Rows(run.out);
      ASSERT_EQ(rows.size(), want.size()) << text;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        ASSERT_EQ(rows[i].size(), 4u);
        EXPECT_EQ(rows[i][0], std::to_string(i + 1));
        EXPECT_EQ(rows[i][1], want[i].word);
        EXPECT_EQ(rows[i][2], Fixed6(want[i].score));
        EXPECT_EQ(rows[i][3], std::to_string(want[i].matched_order));
      }
    }
  }
}

TEST(CliPredictTest, PrefixAndCompletion) {
  CliResult run = Cli({"predict", "--model", kMiniModel, "--prefix", "se", "bo"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  EXPECT_EQ(run.out, "1\tseyran\t0.333333\t2\n");
  run = Cli({"complete", "--model", kMiniModel, "ew"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto rows = Rows(run.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], "ew");
  EXPECT_EQ(rows[1][1], "ewan");
}

TEST(CliExitCodeTest, UsageDataAndIoErrorsAreDistinguished) {
  // Usage.
  EXPECT_EQ(Cli({}).exit_code, 1);
  EXPECT_EQ(Cli({"predict", "--no-such-flag"}).exit_code, 1);
  EXPECT_EQ(Cli({"predict", "--model", kMiniModel, "--k", "0"}).exit_code, 1);
  EXPECT_EQ(Cli({"predict", "--model", kMiniModel, "--lambda", "2", "bo"})
                .exit_code,
            1);
  EXPECT_EQ(Cli({"eval", "--corpus", RepoData("mini/bo_bazar_latin.txt"),
                 "--max-order", "9"})
                .exit_code,
            1);
  // I/O.
  TempDir dir;
  EXPECT_EQ(Cli({"predict", "--model", (dir / "absent").string(), "bo"}).exit_code,
            3);
  EXPECT_EQ(Cli({"clean", (dir / "absent.txt").string()}).exit_code, 3);
  // Data.
  Spit(dir / "bad.txt", "ok line\nbad \xff byte\n");
  const CliResult bad = Cli({"clean", (dir / "bad.txt").string()});
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_THAT(bad.err, HasSubstr("bad.txt:2"));
  fs::copy(kMiniModel, dir / "model");
  Spit(dir / "model" / "2-gram.tsv", "word\tfreq\nbo bazar\tx\n");
  const CliResult corrupt = Cli({"predict", "--model", (dir / "model").string(), "bo"});
  EXPECT_EQ(corrupt.exit_code, 2);
  EXPECT_THAT(corrupt.err, HasSubstr("2-gram.tsv:2"));
  EXPECT_TRUE(corrupt.out.empty());
}

TEST(CliCleanTest, StatsMatchTheHandTally) {
  uint64_t sentences = 0;
  uint64_t tokens = 0;
  for (const auto& row : Rows(Slurp(TestData("clean_fixture_tally.tsv")))) {
    if (row[0] == "line") continue;
    sentences += std::stoull(row[1]);
    tokens += std::stoull(row[2]);
  }
  TempDir dir;
  const CliResult run = Cli({"clean", TestData("clean_fixture.txt"), "-o",
                       (dir / "clean.txt").string()});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  EXPECT_TRUE(run.out.empty());
  EXPECT_THAT(run.err, HasSubstr("sentences\t" + std::to_string(sentences) + "\n"));
  EXPECT_THAT(run.err, HasSubstr("tokens\t" + std::to_string(tokens) + "\n"));
  // One sentence per line, tokens separated by single spaces.
  const auto lines = Rows(Slurp(dir / "clean.txt"));
  EXPECT_EQ(lines.size(), sentences);
  const std::string cleaned = Slurp(dir / "clean.txt");
  EXPECT_EQ(cleaned.find("  "), std::string::npos);
  // Cleaning the cleaned output changes nothing.
  const CliResult again = Cli({"clean", (dir / "clean.txt").string()});
  EXPECT_EQ(again.out, cleaned);
}

TEST(CliCleanTest, EmptyFileGivesEmptyOutputAndZeroCounts) {
  TempDir dir;
  Spit(dir / "empty.txt", "");
  const CliResult run = Cli({"clean", (dir / "empty.txt").string()});
  ASSERT_EQ(run.exit_code, 0);
  EXPECT_TRUE(run.out.empty());
  EXPECT_THAT(run.err, HasSubstr("sentences\t0\n"));
  EXPECT_THAT(run.err, HasSubstr("tokens\t0\n"));
}

TEST(CliBuildTest, TwoTokenCorpusAndByteIdenticalRebuild) {
  TempDir dir;
  Spit(dir / "ab.txt", "a b\n");
  CliResult run = Cli({"build", (dir / "ab.txt").string(), "--model",
                 (dir / "m").string(), "--max-order", "2"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  EXPECT_EQ(Slurp(dir / "m" / "1-gram.tsv"), "word\tfreq\n</s>\t1\na\t1\nb\t1\n");
  EXPECT_EQ(Slurp(dir / "m" / "2-gram.tsv"),
            "word\tfreq\n<s> a\t1\na b\t1\nb </s>\t1\n");
  const std::string first = Slurp(dir / "m" / "2-gram.tsv");

  run = Cli({"build", (dir / "ab.txt").string(), "--model", (dir / "m").string(),
             "--max-order", "2"});
  EXPECT_EQ(run.exit_code, 3) << "existing model must not be replaced silently";
  run = Cli({"build", (dir / "ab.txt").string(), "--model", (dir / "m").string(),
             "--max-order", "2", "--overwrite"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  EXPECT_EQ(Slurp(dir / "m" / "2-gram.tsv"), first);
}

TEST(CliBuildTest, TopTenListsMatchABruteForceSort) {
  TempDir dir;
  const std::string corpus = RepoData("sample/kurmanji_sample.txt");
  const CliResult run = Cli({"build", corpus, "--model", (dir / "m").string(),
                       "--plot-data", (dir / "plot.tsv").string()});
  ASSERT_EQ(run.exit_code, 0) << run.err;

  NormalizationConfig config;
  config.codepoint_map = CodepointMap::SoraniDefault();
  oracle::Corpus sentences;
  for (const Sentence& s : NormalizeText(Slurp(corpus), config)) {
    sentences.push_back(s.tokens);
  }
  std::map<int, std::vector<std::string>> printed;
  for (const auto& row : Rows(run.out)) {
    if (row[0] == "order") continue;
    ASSERT_EQ(row.size(), 4u);
    printed[std::stoi(row[0])].push_back(row[2] + "\t" + row[3]);
  }
  ASSERT_EQ(printed.size(), 5u);
  for (int n = 1; n <= 5; ++n) {
    std::vector<std::pair<uint64_t, std::string>> all;
    for (const auto& [key, count] : oracle::Table(sentences, static_cast<std::size_t>(n))) {
      std::string joined;
      for (const std::string& t : key) joined += (joined.empty() ? "" : " ") + t;
      all.emplace_back(count, joined);
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::string> want;
    for (std::size_t i = 0; i < 10 && i < all.size(); ++i) {
      want.push_back(all[i].second + "\t" + std::to_string(all[i].first));
    }
    EXPECT_EQ(printed[n], want) << "order " << n;
  }
  EXPECT_TRUE(fs::exists(dir / "plot.tsv"));
  EXPECT_THAT(Slurp(dir / "plot.tsv"), StartsWith("order\t"));
}

TEST(CliEvalTest, RowCountAndFullCoverage) {
  const std::string corpus = RepoData("mini/bo_bazar_latin.txt");
  CliResult run = Cli({"eval", "--corpus", corpus, "--split", "resub", "--max-order",
                 "3"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  auto rows = Rows(run.out);
  ASSERT_EQ(rows.size(), 4u);  // header and three orders
  EXPECT_EQ(rows[0][0], "n_grams");

  // Sixteen words and the end marker.
  run = Cli({"eval", "--corpus", corpus, "--split", "resub", "--k", "17"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  rows = Rows(run.out);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][4], "100.0%");
}

TEST(CliEvalTest, DeterministicApartFromLatency) {
  const std::vector<std::string> args = {
      "eval", "--corpus", RepoData("sample/kurmanji_sample.txt"), "--seed", "7"};
  const CliResult a = Cli(args);
  const CliResult b = Cli(args);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(Rows(a.out).back(), Rows(b.out).back());
  const auto without_latency = [](const std::string& text) {
    std::string out;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find("latency") == std::string::npos) out += line + "\n";
    }
    return out;
  };
  EXPECT_EQ(without_latency(a.out), without_latency(b.out));
}

TEST(CliEvalTest, JsonReportAndNoBackoffVariant) {
  TempDir dir;
  const CliResult run = Cli({"eval", "--corpus", RepoData("mini/bo_bazar_latin.txt"),
                       "--split", "resub", "--no-backoff", "--json",
                       (dir / "report.json").string()});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  EXPECT_THAT(run.out, HasSubstr("backoff\toff"));
  EXPECT_THAT(Slurp(dir / "report.json"), HasSubstr("\"backoff\": false"));
}

TEST(CliBenchTest, ScalingTableHasOneRowPerSize) {
  const CliResult run = Cli({"bench", "--mode", "scaling", "--corpus",
                       RepoData("sample/kurmanji_sample.txt"), "--sizes", "1000",
                       "5000", "20000"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto rows = Rows(run.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1][0], "1000");
  EXPECT_EQ(rows[3][0], "20000");
}

TEST(CliBenchTest, ServiceLoadTestReportsNoFailures) {
  const CliResult run = Cli({"bench", "--mode", "service", "--model", kMiniModel,
                       "--clients", "8", "--requests", "200", "--text", "bo"});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto rows = Rows(run.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][1], "200");
  EXPECT_EQ(rows[1][2], "0");
  EXPECT_EQ(rows[1][3], "1");
}

}  // namespace
}  // namespace nextword
