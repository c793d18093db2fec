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

#include "nextword/persistence.h"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nextword/error.h"
#include "oracles.h"
#include "test_support.h"

namespace nextword {
namespace {

namespace fs = std::filesystem;
using ::nextword::testing::ModelOf;
using ::nextword::testing::Slurp;
using ::nextword::testing::Spit;
using ::nextword::testing::MiniSentences;
using ::nextword::testing::TempDir;
using ::nextword::testing::TestData;
using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::string WithoutCreated(const std::string& manifest) {
  std::string out;
  for (const std::string& line : Lines(manifest)) {
    if (line.rfind("created = ", 0) != 0) out += line + "\n";
  }
  return out;
}

// The settings the command line uses by default.
NormalizationConfig DefaultNormalization() {
  NormalizationConfig config;
  config.codepoint_map = CodepointMap::SoraniDefault();
  return config;
}

LanguageModel MiniModel() {
  BuildOptions options;
  options.fingerprint = Fingerprint(DefaultNormalization());
  return BuildModel(MiniSentences(), options);
}

void Save(const LanguageModel& model, const fs::path& dir,
          const SaveOptions& options = {}) {
  SaveModel(model, DefaultNormalization(), BackoffConfig{}, dir, options);
}

// Runs the loader and returns the error it raised; fails if it accepted.
Error LoadError(const fs::path& dir) {
  try {
    LoadModel(dir);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "loader accepted " << dir;
  return Error(ErrorCode::kInvalidArgument, "accepted");
}

void ExpectSameAnswers(const LanguageModel& a, const LanguageModel& b,
                       const std::vector<std::vector<std::string>>& contexts) {
  ASSERT_EQ(a.max_order(), b.max_order());
  for (int n = 1; n <= a.max_order(); ++n) EXPECT_EQ(a.table(n), b.table(n));
  EXPECT_EQ(a.corpus_size(), b.corpus_size());
  for (const auto& context : contexts) {
    EXPECT_EQ(Suggest(a, context, 5, BackoffConfig{}),
              Suggest(b, context, 5, BackoffConfig{}));
    for (const Successor& w : a.UnigramsByWord()) {
      EXPECT_EQ(SboScore(a, w.word, context, BackoffConfig{}),
                SboScore(b, w.word, context, BackoffConfig{}));
    }
  }
}

std::vector<std::vector<std::string>> RandomContexts(
    const LanguageModel& model, std::mt19937_64& rng, int count) {
  std::vector<std::string> words;
  for (const Successor& w : model.UnigramsByWord()) words.push_back(w.word);
  words.push_back("oov");
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> length(0, 4);
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < count; ++i) {
    std::vector<std::string> context;
    for (int j = length(rng); j > 0; --j) context.push_back(words[pick(rng)]);
    out.push_back(context);
  }
  return out;
}

TEST(SaveModelTest, TwoWordCorpusGivesThreeUnigramRows) {
  TempDir dir;
  Save(ModelOf({{"a", "b"}}), dir.path());
  EXPECT_EQ(Slurp(dir / "1-gram.tsv"), "word\tfreq\n</s>\t1\na\t1\nb\t1\n");
  EXPECT_TRUE(fs::exists(dir / "manifest"));
  EXPECT_TRUE(fs::exists(dir / "5-gram.tsv"));
}

TEST(SaveModelTest, FilesAreLfUtf8WithoutBom) {
  TempDir dir;
  Save(MiniModel(), dir.path());
  for (const auto& entry : fs::directory_iterator(dir.path())) {
    const std::string bytes = Slurp(entry.path());
    EXPECT_EQ(bytes.find('\r'), std::string::npos) << entry.path();
    EXPECT_NE(bytes.rfind("\xEF\xBB\xBF", 0), 0u) << entry.path();
    EXPECT_EQ(bytes.back(), '\n') << entry.path();
  }
}

TEST(SaveModelTest, ResavingIsByteIdenticalApartFromTheTimestamp) {
  const LanguageModel model = MiniModel();
  TempDir first;
  TempDir second;
  Save(model, first.path());
  Save(model, second.path());
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(Slurp(first / TableFileName(n)), Slurp(second / TableFileName(n)));
  }
  EXPECT_EQ(Slurp(first / "normalization.map"),
            Slurp(second / "normalization.map"));
  EXPECT_EQ(WithoutCreated(Slurp(first / "manifest")),
            WithoutCreated(Slurp(second / "manifest")));
}

TEST(SaveModelTest, RefusesToOverwriteUnlessAsked) {
  const LanguageModel model = ModelOf({{"a", "b"}});
  TempDir dir;
  Save(model, dir.path());
  try {
    Save(model, dir.path());
    FAIL() << "expected a write collision";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWriteCollision);
  }
  SaveOptions overwrite;
  overwrite.overwrite = true;
  EXPECT_NO_THROW(Save(model, dir.path(), overwrite));
}

TEST(SaveModelTest, MiniMatchesTheAuditedGoldenFiles) {
  TempDir dir;
  Save(MiniModel(), dir.path());
  const fs::path golden = TestData("mini_model");
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(Slurp(dir / TableFileName(n)), Slurp(golden / TableFileName(n)))
        << TableFileName(n);
  }
  EXPECT_EQ(Slurp(dir / "normalization.map"),
            Slurp(golden / "normalization.map"));
  EXPECT_EQ(WithoutCreated(Slurp(dir / "manifest")),
            WithoutCreated(Slurp(golden / "manifest")));
}

TEST(LoadModelTest, GoldenMiniModelPredicts) {
  const LoadedModel loaded = LoadModel(TestData("mini_model"));
  EXPECT_THAT(loaded.warnings, IsEmpty());
  EXPECT_EQ(loaded.manifest.created, "2026-01-01T00:00:00Z");
  EXPECT_EQ(loaded.engine.model.corpus_size(), 26u);
  const std::vector<std::string> context = {"bo"};
  const std::vector<Suggestion> got =
      Suggest(loaded.engine.model, context, 5, BackoffConfig{});
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].word, "bazar");
  EXPECT_EQ(got[1].word, "seyran");
}

TEST(LoadModelTest, RoundTripAnswersEveryQueryIdentically) {
  const LanguageModel model = MiniModel();
  TempDir dir;
  Save(model, dir.path());
  const LoadedModel loaded = LoadModel(dir.path());
  std::mt19937_64 rng(47);
  ExpectSameAnswers(model, loaded.engine.model, RandomContexts(model, rng, 100));
  EXPECT_EQ(loaded.engine.model_id, ModelId(model));
  EXPECT_EQ(loaded.engine.backoff.lambda, 0.4);
}

TEST(LoadModelTest, RoundTripOverRandomCorpora) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    const LanguageModel model = ModelOf(
        oracle::RandomCorpus(rng, 20, 30), 1 + trial % 5);
    TempDir dir;
    Save(model, dir.path());
    const LanguageModel loaded = LoadModel(dir.path()).engine.model;
    ExpectSameAnswers(model, loaded, RandomContexts(model, rng, 20));
    for (const Successor& w : model.UnigramsByWord()) {
      const std::vector<std::string> none;
      EXPECT_EQ(MleProb(model, w.word, none), MleProb(loaded, w.word, none));
    }
  }
}

TEST(LoadModelTest, DuplicateKeyReportsItsLine) {
  TempDir dir;
  Save(ModelOf({{"a", "b"}}), dir.path());
  Spit(dir / "1-gram.tsv", "word\tfreq\n</s>\t1\na\t1\na\t1\n");
  const Error e = LoadError(dir.path());
  EXPECT_EQ(e.code(), ErrorCode::kCorruptRow);
  EXPECT_EQ(e.line(), 4u);
  EXPECT_THAT(e.path(), HasSubstr("1-gram.tsv"));
  EXPECT_THAT(std::string(e.what()), HasSubstr("duplicate"));
}

TEST(LoadModelTest, NonIntegerCountAndWrongArityReportTheirLines) {
  TempDir dir;
  Save(ModelOf({{"a", "b"}}, 2), dir.path());
  const std::string original = Slurp(dir / "2-gram.tsv");
  Spit(dir / "2-gram.tsv", "word\tfreq\n<s> a\t1\na b\tone\nb </s>\t1\n");
  Error e = LoadError(dir.path());
  EXPECT_EQ(e.code(), ErrorCode::kCorruptRow);
  EXPECT_EQ(e.line(), 3u);
  Spit(dir / "2-gram.tsv", "word\tfreq\n<s> a\t1\na\t1\nb </s>\t1\n");
  e = LoadError(dir.path());
  EXPECT_EQ(e.code(), ErrorCode::kCorruptRow);
  EXPECT_EQ(e.line(), 3u);
}

TEST(LoadModelTest, RowCountMismatchIsReported) {
  TempDir dir;
  // Eight words and the end marker: nine unigram rows.
  Save(ModelOf({{"a", "b", "c", "d", "e", "f", "g", "h"}}, 1), dir.path());
  std::string manifest = Slurp(dir / "manifest");
  const std::size_t at = manifest.find("rows.1 = 9\n");
  ASSERT_NE(at, std::string::npos);
  manifest.replace(at, 11, "rows.1 = 10\n");
  Spit(dir / "manifest", manifest);
  const Error e = LoadError(dir.path());
  EXPECT_EQ(e.code(), ErrorCode::kRowCountMismatch);
  EXPECT_THAT(std::string(e.what()), HasSubstr("10"));
}

TEST(LoadModelTest, UnknownFormatVersionIsRejected) {
  TempDir dir;
  Save(ModelOf({{"a", "b"}}), dir.path());
  std::string manifest = Slurp(dir / "manifest");
  manifest.replace(manifest.find("format_version = 1"), 18,
                   "format_version = 2");
  Spit(dir / "manifest", manifest);
  EXPECT_EQ(LoadError(dir.path()).code(), ErrorCode::kVersionMismatch);
}

TEST(LoadModelTest, MissingFilesAreReported) {
  TempDir dir;
  EXPECT_EQ(LoadError(dir.path()).code(), ErrorCode::kMissingFile);
  Save(ModelOf({{"a", "b"}}), dir.path());
  fs::remove(dir / "3-gram.tsv");
  const Error e = LoadError(dir.path());
  EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
  EXPECT_THAT(e.path(), HasSubstr("3-gram.tsv"));
}

TEST(LoadModelTest, FingerprintMismatchOnlyWarns) {
  TempDir dir;
  Save(ModelOf({{"a", "b"}}), dir.path());
  std::string manifest = Slurp(dir / "manifest");
  const std::size_t at = manifest.find("normalization_fingerprint = ");
  manifest.replace(at + 28, 16, "0000000000000001");
  Spit(dir / "manifest", manifest);
  const LoadedModel loaded = LoadModel(dir.path());
  ASSERT_EQ(loaded.warnings.size(), 1u);
  EXPECT_THAT(loaded.warnings[0], HasSubstr("fingerprint"));
}

TEST(LoadModelTest, ManifestTotalsAreCrossChecked) {
  TempDir dir;
  Save(ModelOf({{"a", "b"}}), dir.path());
  std::string manifest = Slurp(dir / "manifest");
  manifest.replace(manifest.find("corpus_size_N = 3"), 17, "corpus_size_N = 4");
  Spit(dir / "manifest", manifest);
  EXPECT_EQ(LoadError(dir.path()).code(), ErrorCode::kCorruptManifest);
}

TEST(LoadModelTest, EditedCountIsLocalizedToItsRow) {
  TempDir dir;
  Save(MiniModel(), dir.path());
  std::vector<std::string> lines = Lines(Slurp(dir / "2-gram.tsv"));
  ASSERT_EQ(lines[7], "ebrwat bo\t1");
  // Raise the count and move the row so the file stays sorted: only the
  // digest and the cross-order check can notice.
  lines.erase(lines.begin() + 7);
  lines.insert(lines.begin() + 5, "ebrwat bo\t2");
  std::string text;
  for (const std::string& line : lines) text += line + "\n";
  Spit(dir / "2-gram.tsv", text);
  const Error e = LoadError(dir.path());
  EXPECT_EQ(e.code(), ErrorCode::kCorruptRow);
  EXPECT_EQ(e.line(), 6u);
}

// Every single-byte change to a count and every deleted tab must be caught
// with a line number, never loaded silently.
TEST(LoadModelTest, FuzzedTablesAreAlwaysRejectedWithALine) {
  std::mt19937_64 rng(59);
  std::vector<LanguageModel> models = {
      MiniModel()};
  for (int i = 0; i < 4; ++i) {
    models.push_back(ModelOf(oracle::RandomCorpus(rng, 12, 10), 2 + i));
  }
  int mutations = 0;
  for (const LanguageModel& model : models) {
    TempDir dir;
    Save(model, dir.path());
    for (int n = 1; n <= model.max_order(); ++n) {
      const fs::path path = dir / TableFileName(n);
      const std::string original = Slurp(path);
      std::vector<std::string> variants;
      for (std::size_t i = 0; i < original.size(); ++i) {
        if (original[i] == '\t') {
          std::string cut = original;
          cut.erase(i, 1);
          variants.push_back(cut);
          // Each byte of the count that follows.
          for (std::size_t j = i + 1; original[j] != '\n'; ++j) {
            for (int b = 0; b < 256; b += 1 + static_cast<int>(rng() % 16)) {
              if (static_cast<char>(b) == original[j]) continue;
              std::string flipped = original;
              flipped[j] = static_cast<char>(b);
              variants.push_back(flipped);
            }
          }
        }
      }
      // And random bytes anywhere.
      std::uniform_int_distribution<std::size_t> where(0, original.size() - 1);
      for (int r = 0; r < 100; ++r) {
        std::string flipped = original;
        const std::size_t at = where(rng);
        flipped[at] = static_cast<char>(flipped[at] ^ (1 + rng() % 255));
        variants.push_back(flipped);
      }
      for (const std::string& variant : variants) {
        Spit(path, variant);
        try {
          LoadModel(dir.path());
          ADD_FAILURE() << "accepted a mutation of " << path;
        } catch (const Error& e) {
          EXPECT_GT(e.line(), 0u) << ErrorCodeName(e.code()) << ": " << e.what();
        }
        ++mutations;
      }
      Spit(path, original);
    }
  }
  EXPECT_GT(mutations, 1000);
}

TEST(ManifestTest, RendersAndParsesBack) {
  const ModelManifest parsed = ParseManifest(
      Slurp(TestData("mini_model/manifest")), "manifest");
  EXPECT_EQ(parsed.max_order, 5);
  EXPECT_EQ(parsed.corpus_size, 26u);
  EXPECT_EQ(parsed.tables.size(), 5u);
  EXPECT_EQ(parsed.tables[1].rows, 22u);
  EXPECT_EQ(RenderManifest(parsed), Slurp(TestData("mini_model/manifest")));
}

TEST(ManifestTest, MalformedLinesReportTheirNumber) {
  std::vector<std::string> lines =
      Lines(Slurp(TestData("mini_model/manifest")));
  lines[4] = "corpus_size_N 26";
  std::string text;
  for (const std::string& line : lines) text += line + "\n";
  try {
    ParseManifest(text, "manifest");
    FAIL() << "expected a corrupt manifest";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptManifest);
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(TableFormatTest, RowsSortByCountThenKey) {
  const LanguageModel model = ModelOf({{"b", "a", "b", "ç", "a", "b"}}, 1);
  EXPECT_THAT(Lines(RenderTable(model.table(1))),
              ElementsAre("word\tfreq", "b\t3", "a\t2", "</s>\t1", "ç\t1"));
}

}  // namespace
}  // namespace nextword
