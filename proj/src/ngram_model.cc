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

#include "nextword/ngram_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "nextword/error.h"

namespace nextword {
namespace {

bool SuccessorOrder(const Successor& a, const Successor& b) {
  if (a.count != b.count) return a.count > b.count;
  return a.word < b.word;
}

void CheckOrder(int order, int max_order) {
  if (order < 1 || order > max_order) {
    throw Error(ErrorCode::kOrderOutOfRange,
                "order " + std::to_string(order) + " outside 1.." +
                    std::to_string(max_order));
  }
}

}  // namespace

std::string JoinKey(std::span<const std::string> tokens) {
  std::string key;
  std::size_t size = tokens.empty() ? 0 : tokens.size() - 1;
  for (const std::string& t : tokens) size += t.size();
  key.reserve(size);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) key += ' ';
    key += tokens[i];
  }
  return key;
}

std::vector<std::string> SplitKey(std::string_view key) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t space = key.find(' ', pos);
    if (space == std::string_view::npos) {
      out.emplace_back(key.substr(pos));
      return out;
    }
    out.emplace_back(key.substr(pos, space - pos));
    pos = space + 1;
  }
}

NGramTable::NGramTable(int order) : order_(order) {
  CheckOrder(order, kMaxOrder);
}

uint64_t NGramTable::Count(std::string_view key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

void NGramTable::Add(std::string_view key, uint64_t count) {
  if (count == 0) return;
  auto it = counts_.find(key);
  if (it == counts_.end()) {
    counts_.emplace(std::string(key), count);
  } else {
    it->second += count;
  }
  total_ += count;
}

void NGramTable::Merge(const NGramTable& other) {
  for (const auto& [key, count] : other.counts_) Add(key, count);
}

void NGramTable::Prune(uint64_t min_count) {
  for (auto it = counts_.begin(); it != counts_.end();) {
    if (it->second < min_count) {
      total_ -= it->second;
      it = counts_.erase(it);
    } else {
      ++it;
    }
  }
}

std::vector<NGramTable::Row> NGramTable::SortedRows() const {
  std::vector<Row> rows;
  rows.reserve(counts_.size());
  for (const auto& [key, count] : counts_) rows.push_back({key, count});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  return rows;
}

LanguageModel::LanguageModel(std::vector<NGramTable> tables,
                             BoundaryMarkers markers, uint64_t fingerprint)
    : tables_(std::move(tables)),
      markers_(std::move(markers)),
      fingerprint_(fingerprint) {
  if (tables_.empty()) {
    throw Error(ErrorCode::kEmptyModel, "no n-gram tables");
  }
  CheckOrder(static_cast<int>(tables_.size()), kMaxOrder);
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (tables_[i].order() != static_cast<int>(i) + 1) {
      throw Error(ErrorCode::kInvalidArgument, "tables out of order");
    }
  }
  sentence_count_ = tables_.front().Count(markers_.end);

  for (const auto& [word, count] : tables_.front().entries()) {
    by_count_.push_back({word, count});
    if (!IsMarker(word)) by_word_.push_back({word, count});
  }
  std::sort(by_count_.begin(), by_count_.end(), SuccessorOrder);
  std::sort(by_word_.begin(), by_word_.end(),
            [](const Successor& a, const Successor& b) {
              return a.word < b.word;
            });

  successors_.resize(tables_.size() - 1);
  for (std::size_t order = 2; order <= tables_.size(); ++order) {
    auto& index = successors_[order - 2];
    for (const auto& [key, count] : tables_[order - 1].entries()) {
      const std::size_t split = key.rfind(' ');
      index[key.substr(0, split)].push_back({key.substr(split + 1), count});
    }
    for (auto& [context, list] : index) {
      std::sort(list.begin(), list.end(), SuccessorOrder);
    }
  }
}

const NGramTable& LanguageModel::table(int order) const {
  CheckOrder(order, max_order());
  return tables_[static_cast<std::size_t>(order) - 1];
}

uint64_t LanguageModel::Count(std::span<const std::string> tokens) const {
  CheckOrder(static_cast<int>(tokens.size()), max_order());
  if (std::all_of(tokens.begin(), tokens.end(), [this](const std::string& t) {
        return t == markers_.begin;
      })) {
    return sentence_count_;
  }
  return tables_[tokens.size() - 1].Count(JoinKey(tokens));
}

std::span<const Successor> LanguageModel::Successors(
    std::span<const std::string> context) const {
  if (context.empty() || static_cast<int>(context.size()) >= max_order()) {
    return {};
  }
  const auto& index = successors_[context.size() - 1];
  auto it = index.find(JoinKey(context));
  if (it == index.end()) return {};
  return it->second;
}

LanguageModel BuildModel(std::span<const Sentence> sentences,
                         const BuildOptions& options) {
  CheckOrder(options.max_order, kMaxOrder);
  std::vector<NGramTable> tables;
  tables.reserve(static_cast<std::size_t>(options.max_order));
  for (int n = 1; n <= options.max_order; ++n) {
    NGramTable table = options.parallel
                           ? CountNGrams(sentences, n, options.markers)
                           : CountNGramsSerial(sentences, n, options.markers);
    if (options.min_count > 1) table.Prune(options.min_count);
    tables.push_back(std::move(table));
  }
  return LanguageModel(std::move(tables), options.markers,
                       options.fingerprint);
}

double MleProb(const LanguageModel& model, std::string_view word,
               std::span<const std::string> context) {
  if (static_cast<int>(context.size()) > model.max_order() - 1) {
    throw Error(ErrorCode::kContextTooLong,
                std::to_string(context.size()) + " context tokens for a " +
                    std::to_string(model.max_order()) + "-gram model");
  }
  std::vector<std::string> full(context.begin(), context.end());
  full.emplace_back(word);
  const uint64_t numerator = model.Count(full);
  const uint64_t denominator =
      context.empty() ? model.corpus_size() : model.Count(context);
  if (denominator == 0) {
    throw Error(ErrorCode::kUndefinedDistribution,
                "context '" + JoinKey(context) + "' never observed");
  }
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

double SequenceLogProb(const LanguageModel& model,
                       std::span<const std::string> tokens, int order) {
  CheckOrder(order, model.max_order());
  const auto& m = model.markers();
  std::vector<std::string> padded(static_cast<std::size_t>(order) - 1, m.begin);
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  padded.push_back(m.end);

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double log_prob = 0.0;
  for (std::size_t i = static_cast<std::size_t>(order) - 1; i < padded.size();
       ++i) {
    std::span<const std::string> context(
        padded.data() + i - (static_cast<std::size_t>(order) - 1),
        static_cast<std::size_t>(order) - 1);
    double p;
    try {
      p = MleProb(model, padded[i], context);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedDistribution) throw;
      return kNegInf;
    }
    if (p == 0.0) return kNegInf;
    log_prob += std::log(p);
  }
  return log_prob;
}

}  // namespace nextword
