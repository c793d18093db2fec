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

#ifndef NEXTWORD_PREDICTOR_H_
#define NEXTWORD_PREDICTOR_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nextword/ngram_model.h"
#include "nextword/normalize.h"

namespace nextword {

struct BackoffConfig {
  double lambda = 0.4;
  std::size_t k_suggestions = 5;

  // Throws kInvalidArgument unless 0 < lambda <= 1 and k_suggestions >= 1.
  void Validate() const;
};

struct Suggestion {
  std::string word;
  double score = 0.0;
  int matched_order = 0;
  int backoff_depth = 0;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

struct PredictionRequest {
  std::string context_text;
  std::optional<std::size_t> k;
  std::optional<std::string> prefix;
};

// Stupid Backoff score S(word | context). The context is trimmed to the
// model's last max_order-1 tokens. Uses the longest suffix of the context
// that was followed by `word`, discounted by lambda once per dropped token;
// falls back to count(word)/N. Zero only for words never seen. Not a
// probability: scores for a context do not sum to one.
double SboScore(const LanguageModel& model, std::string_view word,
                std::span<const std::string> context,
                const BackoffConfig& config);

// SboScore with the order that produced the score. matched_order is zero
// when the word is out of vocabulary.
Suggestion ScoreWord(const LanguageModel& model, std::string_view word,
                     std::span<const std::string> context, double lambda);

struct RankOptions {
  double lambda = 0.4;
  std::size_t k = 5;
  std::string_view prefix;
  // Evaluation treats the end marker as a predictable word.
  bool include_end_marker = false;
  // With backoff off only the full (trimmed) context is consulted.
  bool backoff = true;
  // Unigrams enter the candidate set only when no context suffix produced an
  // admissible word, unless this is set: then the list is topped up with
  // backed-off unigrams, so every vocabulary word is rankable.
  bool fill_with_unigrams = false;
};

// Top-k candidates for the next word. Candidates come from every suffix of
// the context, longest first, and then from the unigram list; a word keeps
// its longest-match score. Ranked by score, then unigram count, then word.
std::vector<Suggestion> RankNextWords(const LanguageModel& model,
                                      std::span<const std::string> context,
                                      const RankOptions& options);

// Ranked next words for a tokenized context. Candidates are the words seen
// after any suffix of the (trimmed) context, each scored at its longest
// match; only when none qualifies does the list fall back to unigrams scaled
// by lambda^|context|. Ties: score, then unigram count (both descending), then
// byte order. Boundary markers are never suggested.
std::vector<Suggestion> Suggest(const LanguageModel& model,
                                std::span<const std::string> context,
                                std::size_t k, const BackoffConfig& config,
                                std::string_view prefix = {});

// Normalizes request.context_text and request.prefix with `normalization`
// (which must be the pipeline the model was trained with) and ranks.
// Throws kEmptyModel when the model has no counts.
std::vector<Suggestion> Suggest(const LanguageModel& model,
                                const PredictionRequest& request,
                                const BackoffConfig& config,
                                const NormalizationConfig& normalization);

// Vocabulary words starting with `prefix`, by count then word.
std::vector<Suggestion> CompletePrefix(const LanguageModel& model,
                                       std::string_view prefix, std::size_t k);

// A loaded model together with the settings needed to serve it.
struct Engine {
  LanguageModel model;
  NormalizationConfig normalization;
  BackoffConfig backoff;
  std::string model_id;
};

// Content hash of the tables; stable across save/load and restarts.
std::string ModelId(const LanguageModel& model);

std::vector<Suggestion> Predict(const Engine& engine,
                                const PredictionRequest& request);

}  // namespace nextword

#endif  // NEXTWORD_PREDICTOR_H_
