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

#ifndef NEXTWORD_NGRAM_MODEL_H_
#define NEXTWORD_NGRAM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nextword/normalize.h"

namespace nextword {

inline constexpr int kMaxOrder = 5;

struct BoundaryMarkers {
  std::string begin = "<s>";
  std::string end = "</s>";
};

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// N-gram keys are the tokens joined by single spaces. Tokens never contain
// whitespace, so the encoding is unambiguous.
std::string JoinKey(std::span<const std::string> tokens);
std::vector<std::string> SplitKey(std::string_view key);

// Counts for one fixed order. Zero counts are never stored.
class NGramTable {
 public:
  struct Row {
    std::string key;
    uint64_t count;
  };

  explicit NGramTable(int order);

  int order() const { return order_; }
  uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }
  uint64_t Count(std::string_view key) const;

  // `count` must be positive.
  void Add(std::string_view key, uint64_t count = 1);
  void Merge(const NGramTable& other);
  // Drops rows below `min_count`.
  void Prune(uint64_t min_count);

  const StringMap<uint64_t>& entries() const { return counts_; }
  // Count descending, then key ascending by byte (= codepoint) order.
  std::vector<Row> SortedRows() const;

  friend bool operator==(const NGramTable& a, const NGramTable& b) {
    return a.order_ == b.order_ && a.total_ == b.total_ &&
           a.counts_ == b.counts_;
  }

 private:
  int order_;
  uint64_t total_ = 0;
  StringMap<uint64_t> counts_;
};

// Pads each sentence with n-1 begin markers and one end marker and counts
// every n-token window. Sentences are sharded across OpenMP threads and the
// per-thread tables merged.
NGramTable CountNGrams(std::span<const Sentence> sentences, int n,
                       const BoundaryMarkers& markers);
// Single-threaded reference for CountNGrams.
NGramTable CountNGramsSerial(std::span<const Sentence> sentences, int n,
                             const BoundaryMarkers& markers);

struct Successor {
  std::string word;
  uint64_t count;
};

// Tables for orders 1..max_order plus the indexes prediction needs. Immutable
// once built; safe to share across threads.
class LanguageModel {
 public:
  LanguageModel(std::vector<NGramTable> tables, BoundaryMarkers markers,
                uint64_t fingerprint);

  int max_order() const { return static_cast<int>(tables_.size()); }
  const NGramTable& table(int order) const;
  const BoundaryMarkers& markers() const { return markers_; }
  uint64_t fingerprint() const { return fingerprint_; }

  // N: total of the order-1 table (end markers included, begin markers not).
  uint64_t corpus_size() const { return tables_.front().total(); }
  // Number of training sentences, read off the end-marker unigram.
  uint64_t sentence_count() const { return sentence_count_; }
  // Vocabulary excluding boundary markers.
  std::size_t vocab_size() const { return by_word_.size(); }

  bool IsMarker(std::string_view token) const {
    return token == markers_.begin || token == markers_.end;
  }

  // c(tokens), 1 <= tokens.size() <= max_order. A sequence made only of
  // begin markers occurs once per sentence.
  uint64_t Count(std::span<const std::string> tokens) const;

  // Words w with c(context w) > 0, sorted by count descending then word.
  // Empty when the context was never followed by anything.
  std::span<const Successor> Successors(
      std::span<const std::string> context) const;

  // Order-1 entries (end marker included) by count descending, then word.
  std::span<const Successor> UnigramsByCount() const { return by_count_; }
  // Order-1 words without markers, sorted by word.
  std::span<const Successor> UnigramsByWord() const { return by_word_; }

 private:
  std::vector<NGramTable> tables_;
  BoundaryMarkers markers_;
  uint64_t fingerprint_;
  uint64_t sentence_count_ = 0;
  // successors_[L-1]: context key of length L -> followers.
  std::vector<StringMap<std::vector<Successor>>> successors_;
  std::vector<Successor> by_count_;
  std::vector<Successor> by_word_;
};

struct BuildOptions {
  int max_order = kMaxOrder;
  uint64_t min_count = 1;
  BoundaryMarkers markers;
  uint64_t fingerprint = 0;
  bool parallel = true;
};

LanguageModel BuildModel(std::span<const Sentence> sentences,
                         const BuildOptions& options);

// c(context word) / c(context); c(word) / N for an empty context.
// Throws kContextTooLong past max_order-1 tokens and kUndefinedDistribution
// when the context was never seen.
double MleProb(const LanguageModel& model, std::string_view word,
               std::span<const std::string> context);

// Chain-rule log-probability of one sentence under the order-`order` MLE
// model, padded like training data. -infinity when any factor is zero.
double SequenceLogProb(const LanguageModel& model,
                       std::span<const std::string> tokens, int order);

}  // namespace nextword

#endif  // NEXTWORD_NGRAM_MODEL_H_
