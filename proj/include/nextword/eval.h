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

#ifndef NEXTWORD_EVAL_H_
#define NEXTWORD_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nextword/ngram_model.h"
#include "nextword/normalize.h"

namespace nextword {

enum class SplitMode { kHeldOut, kFile, kResubstitution };

std::string_view SplitModeName(SplitMode mode);
// Accepts "heldout", "file", "resub"; throws kInvalidArgument otherwise.
SplitMode ParseSplitMode(std::string_view name);

struct EvalConfig {
  std::size_t k = 5;
  // Highest order evaluated; 0 means the model's own maximum.
  int max_order = 0;
  SplitMode split = SplitMode::kHeldOut;
  double holdout_fraction = 0.1;
  uint64_t seed = 42;
  double lambda = 0.4;
  bool backoff = true;

  // Throws kInvalidArgument on k == 0, a fraction outside (0, 1), lambda
  // outside (0, 1] or an order outside 0..kMaxOrder.
  void Validate() const;
};

struct EvalRow {
  int order = 0;
  uint64_t total = 0;
  uint64_t correct = 0;

  double accuracy() const {
    return total == 0 ? 0.0
                      : static_cast<double>(correct) / static_cast<double>(total);
  }
  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // one per order 1..max_order
  std::size_t k = 0;
  SplitMode split = SplitMode::kHeldOut;
  bool backoff = true;
  std::string train_id;
  std::string test_id;
  double mean_latency_us = 0.0;
  double p95_latency_us = 0.0;
};

// Top-k accuracy per order. At order n every position of every padded test
// sentence (end marker included) is predicted from its n-1 preceding tokens;
// the prediction counts as correct when the true token is among the k
// best-ranked candidates. Positions are spread across OpenMP threads.
EvalReport EvaluateTopK(const LanguageModel& model,
                        std::span<const Sentence> test,
                        const EvalConfig& config);
// Single-threaded reference with identical counts.
EvalReport EvaluateTopKSerial(const LanguageModel& model,
                              std::span<const Sentence> test,
                              const EvalConfig& config);

struct SplitSentences {
  std::vector<Sentence> train;
  std::vector<Sentence> test;
};
// Seeded shuffle, then the first round(fraction * n) sentences (at least one)
// become the test set. Needs at least two sentences.
SplitSentences HoldOut(std::span<const Sentence> sentences, double fraction,
                       uint64_t seed);

struct ScalingRow {
  std::size_t size = 0;  // training tokens
  std::size_t vocab_size = 0;
  double accuracy = 0.0;  // top-k at the highest order
  double mean_latency_us = 0.0;
  double p95_latency_us = 0.0;
};

// The last tenth of the sentences (at least one) is a fixed test set; for
// each size a model is built on exactly the first `size` tokens of the rest.
// Sizes must be positive and ascending (kInvalidArgument) and fit into the
// training part (kInsufficientCorpus).
std::vector<ScalingRow> BenchmarkScaling(std::span<const Sentence> corpus,
                                         std::span<const std::size_t> sizes,
                                         const EvalConfig& config);

// Tab-separated renderings; '#' lines carry the run metadata.
std::string RenderReportTsv(const EvalReport& report);
std::string RenderReportJson(const EvalReport& report);
std::string RenderScalingTsv(std::span<const ScalingRow> rows,
                             const EvalConfig& config);

}  // namespace nextword

#endif  // NEXTWORD_EVAL_H_
