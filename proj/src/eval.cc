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

#include "nextword/eval.h"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "json.hpp"
#include "nextword/error.h"
#include "nextword/predictor.h"

namespace nextword {
namespace {

using Clock = std::chrono::steady_clock;

struct Tally {
  uint64_t total = 0;
  uint64_t correct = 0;
};

int EffectiveOrder(const LanguageModel& model, const EvalConfig& config) {
  config.Validate();
  if (model.corpus_size() == 0) {
    throw Error(ErrorCode::kEmptyModel, "model has no counts");
  }
  const int order = config.max_order == 0 ? model.max_order() : config.max_order;
  if (order > model.max_order()) {
    throw Error(ErrorCode::kOrderOutOfRange,
                "evaluation order " + std::to_string(order) +
                    " exceeds the model's maximum " +
                    std::to_string(model.max_order()));
  }
  return order;
}

// Predicts every position of one padded sentence at `order`.
void EvaluateSentence(const LanguageModel& model, const Sentence& sentence,
                      int order, const RankOptions& options,
                      std::vector<std::string>& padded, Tally& tally,
                      std::vector<double>& latencies_us) {
  const auto& markers = model.markers();
  const auto history = static_cast<std::size_t>(order - 1);
  padded.assign(history, markers.begin);
  padded.insert(padded.end(), sentence.tokens.begin(), sentence.tokens.end());
  padded.push_back(markers.end);
  for (std::size_t j = history; j < padded.size(); ++j) {
    std::span<const std::string> context(padded.data() + j - history, history);
    const auto start = Clock::now();
    const std::vector<Suggestion> ranked =
        RankNextWords(model, context, options);
    const auto stop = Clock::now();
    latencies_us.push_back(
        std::chrono::duration<double, std::micro>(stop - start).count());
    ++tally.total;
    for (const Suggestion& s : ranked) {
      if (s.word == padded[j]) {
        ++tally.correct;
        break;
      }
    }
  }
}

RankOptions OptionsFor(const EvalConfig& config) {
  RankOptions options;
  options.lambda = config.lambda;
  options.k = config.k;
  options.include_end_marker = true;
  options.backoff = config.backoff;
  options.fill_with_unigrams = true;
  return options;
}

void Summarize(std::vector<double>& latencies, double& mean, double& p95) {
  if (latencies.empty()) {
    mean = p95 = 0.0;
    return;
  }
  mean = std::accumulate(latencies.begin(), latencies.end(), 0.0) /
         static_cast<double>(latencies.size());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(latencies.size())));
  auto nth = latencies.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(latencies.begin(), nth, latencies.end());
  p95 = *nth;
}

EvalReport StartReport(const EvalConfig& config) {
  EvalReport report;
  report.k = config.k;
  report.split = config.split;
  report.backoff = config.backoff;
  return report;
}

std::string FormatFixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string_view SplitModeName(SplitMode mode) {
  switch (mode) {
    case SplitMode::kHeldOut: return "heldout";
    case SplitMode::kFile: return "file";
    case SplitMode::kResubstitution: return "resub";
  }
  return "heldout";
}

SplitMode ParseSplitMode(std::string_view name) {
  if (name == "heldout") return SplitMode::kHeldOut;
  if (name == "file") return SplitMode::kFile;
  if (name == "resub") return SplitMode::kResubstitution;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown split '" + std::string(name) +
                  "' (expected heldout, file or resub)");
}

void EvalConfig::Validate() const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "held-out fraction must lie in (0, 1)");
  }
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must lie in (0, 1]");
  }
  if (max_order < 0 || max_order > kMaxOrder) {
    throw Error(ErrorCode::kOrderOutOfRange,
                "order must lie in 1.." + std::to_string(kMaxOrder));
  }
}

EvalReport EvaluateTopKSerial(const LanguageModel& model,
                              std::span<const Sentence> test,
                              const EvalConfig& config) {
  const int max_order = EffectiveOrder(model, config);
  if (test.empty()) throw Error(ErrorCode::kEmptyTestSet, "no test sentences");
  const RankOptions options = OptionsFor(config);
  EvalReport report = StartReport(config);
  std::vector<double> latencies;
  std::vector<std::string> padded;
  for (int order = 1; order <= max_order; ++order) {
    Tally tally;
    for (const Sentence& sentence : test) {
      EvaluateSentence(model, sentence, order, options, padded, tally,
                       latencies);
    }
    report.rows.push_back({order, tally.total, tally.correct});
  }
  Summarize(latencies, report.mean_latency_us, report.p95_latency_us);
  return report;
}

EvalReport EvaluateTopK(const LanguageModel& model,
                        std::span<const Sentence> test,
                        const EvalConfig& config) {
  const int max_order = EffectiveOrder(model, config);
  if (test.empty()) throw Error(ErrorCode::kEmptyTestSet, "no test sentences");
  const RankOptions options = OptionsFor(config);
  EvalReport report = StartReport(config);
  const auto count = static_cast<std::ptrdiff_t>(test.size());
  std::vector<std::vector<double>> latencies(
      static_cast<std::size_t>(omp_get_max_threads()));

  for (int order = 1; order <= max_order; ++order) {
    uint64_t total = 0;
    uint64_t correct = 0;
#pragma omp parallel reduction(+ : total, correct)
    {
      std::vector<double>& mine =
          latencies[static_cast<std::size_t>(omp_get_thread_num())];
      std::vector<std::string> padded;
      Tally tally;
#pragma omp for schedule(dynamic, 16) nowait
      for (std::ptrdiff_t i = 0; i < count; ++i) {
        EvaluateSentence(model, test[static_cast<std::size_t>(i)], order,
                         options, padded, tally, mine);
      }
      total += tally.total;
      correct += tally.correct;
    }
    report.rows.push_back({order, total, correct});
  }

  std::vector<double> all;
  for (std::vector<double>& part : latencies) {
    all.insert(all.end(), part.begin(), part.end());
  }
  Summarize(all, report.mean_latency_us, report.p95_latency_us);
  return report;
}

SplitSentences HoldOut(std::span<const Sentence> sentences, double fraction,
                       uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "held-out fraction must lie in (0, 1)");
  }
  if (sentences.size() < 2) {
    throw Error(ErrorCode::kInsufficientCorpus,
                "a held-out split needs at least two sentences");
  }
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Fisher-Yates over the raw engine output: mt19937_64 is fully specified,
  // unlike the standard distributions, so splits agree across toolchains.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<std::size_t>(rng() % (i + 1))]);
  }
  std::size_t n_test = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(sentences.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, sentences.size() - 1);

  SplitSentences split;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_test ? split.test : split.train).push_back(sentences[order[i]]);
  }
  return split;
}

std::vector<ScalingRow> BenchmarkScaling(std::span<const Sentence> corpus,
                                         std::span<const std::size_t> sizes,
                                         const EvalConfig& config) {
  config.Validate();
  if (sizes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no corpus sizes given");
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sizes must be positive and strictly ascending");
    }
  }
  if (corpus.size() < 2) {
    throw Error(ErrorCode::kInsufficientCorpus,
                "need at least two sentences to hold out a test tail");
  }
  const std::size_t n_test = std::max<std::size_t>(1, corpus.size() / 10);
  const std::span<const Sentence> pool = corpus.first(corpus.size() - n_test);
  const std::span<const Sentence> test = corpus.last(n_test);
  std::size_t available = 0;
  for (const Sentence& s : pool) available += s.tokens.size();
  if (sizes.back() > available) {
    throw Error(ErrorCode::kInsufficientCorpus,
                "largest size " + std::to_string(sizes.back()) +
                    " exceeds the " + std::to_string(available) +
                    " training tokens before the held-out tail");
  }

  const int max_order = config.max_order == 0 ? kMaxOrder : config.max_order;
  std::vector<ScalingRow> rows;
  for (std::size_t size : sizes) {
    std::vector<Sentence> train;
    std::size_t taken = 0;
    for (const Sentence& s : pool) {
      if (taken == size) break;
      Sentence part;
      const std::size_t want = std::min(s.tokens.size(), size - taken);
      part.tokens.assign(s.tokens.begin(),
                         s.tokens.begin() + static_cast<std::ptrdiff_t>(want));
      taken += want;
      train.push_back(std::move(part));
    }
    BuildOptions build;
    build.max_order = max_order;
    const LanguageModel model = BuildModel(train, build);
    EvalConfig eval = config;
    eval.max_order = max_order;
    const EvalReport report = EvaluateTopK(model, test, eval);
    rows.push_back({size, model.vocab_size(), report.rows.back().accuracy(),
                    report.mean_latency_us, report.p95_latency_us});
  }
  return rows;
}

std::string RenderReportTsv(const EvalReport& report) {
  std::string out;
  out += "# k\t" + std::to_string(report.k) + "\n";
  out += "# split\t" + std::string(SplitModeName(report.split)) + "\n";
  out += "# backoff\t" + std::string(report.backoff ? "on" : "off") + "\n";
  out += "# train\t" + report.train_id + "\n";
  out += "# test\t" + report.test_id + "\n";
  out += "# mean_latency_us\t" + FormatFixed(report.mean_latency_us, 3) + "\n";
  out += "# p95_latency_us\t" + FormatFixed(report.p95_latency_us, 3) + "\n";
  out += "n_grams\ttotal\tcorrect\taccuracy\taccuracy_pct\n";
  for (const EvalRow& row : report.rows) {
    out += std::to_string(row.order) + "\t" + std::to_string(row.total) + "\t" +
           std::to_string(row.correct) + "\t" +
           FormatFixed(row.accuracy(), 6) + "\t" +
           FormatFixed(100.0 * row.accuracy(), 1) + "%\n";
  }
  return out;
}

std::string RenderReportJson(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["split"] = SplitModeName(report.split);
  j["backoff"] = report.backoff;
  j["train"] = report.train_id;
  j["test"] = report.test_id;
  j["mean_latency_us"] = report.mean_latency_us;
  j["p95_latency_us"] = report.p95_latency_us;
  j["rows"] = nlohmann::ordered_json::array();
  for (const EvalRow& row : report.rows) {
    j["rows"].push_back({{"n_grams", row.order},
                         {"total", row.total},
                         {"correct", row.correct},
                         {"accuracy", row.accuracy()}});
  }
  return j.dump(2) + "\n";
}

std::string RenderScalingTsv(std::span<const ScalingRow> rows,
                             const EvalConfig& config) {
  std::string out;
  out += "# k\t" + std::to_string(config.k) + "\n";
  out += "# backoff\t" + std::string(config.backoff ? "on" : "off") + "\n";
  out += "tokens\tvocab\taccuracy_pct\tmean_latency_us\tp95_latency_us\n";
  for (const ScalingRow& row : rows) {
    out += std::to_string(row.size) + "\t" + std::to_string(row.vocab_size) +
           "\t" + FormatFixed(100.0 * row.accuracy, 1) + "\t" +
           FormatFixed(row.mean_latency_us, 3) + "\t" +
           FormatFixed(row.p95_latency_us, 3) + "\n";
  }
  return out;
}

}  // namespace nextword
