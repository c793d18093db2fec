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

#include "nextword/predictor.h"

#include <algorithm>
#include <unordered_set>

#include "nextword/error.h"
#include "nextword/hash.h"

namespace nextword {
namespace {

std::span<const std::string> TrimContext(const LanguageModel& model,
                                         std::span<const std::string> context) {
  const auto keep = static_cast<std::size_t>(model.max_order() - 1);
  if (context.size() > keep) return context.last(keep);
  return context;
}

double Discount(double score, double lambda, std::size_t depth) {
  for (std::size_t i = 0; i < depth; ++i) score = lambda * score;
  return score;
}

struct Candidate {
  Suggestion suggestion;
  uint64_t unigram_count;
};

bool Ranked(const Candidate& a, const Candidate& b) {
  if (a.suggestion.score != b.suggestion.score) {
    return a.suggestion.score > b.suggestion.score;
  }
  if (a.unigram_count != b.unigram_count) {
    return a.unigram_count > b.unigram_count;
  }
  return a.suggestion.word < b.suggestion.word;
}

}  // namespace

void BackoffConfig::Validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lambda must lie in (0, 1], got " + std::to_string(lambda));
  }
  if (k_suggestions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
}

Suggestion ScoreWord(const LanguageModel& model, std::string_view word,
                     std::span<const std::string> context, double lambda) {
  context = TrimContext(model, context);
  std::vector<std::string> full;
  for (std::size_t depth = 0; depth < context.size(); ++depth) {
    std::span<const std::string> suffix = context.subspan(depth);
    const uint64_t context_count = model.Count(suffix);
    if (context_count == 0) continue;
    full.assign(suffix.begin(), suffix.end());
    full.emplace_back(word);
    const uint64_t count = model.Count(full);
    if (count == 0) continue;
    const double ratio =
        static_cast<double>(count) / static_cast<double>(context_count);
    return Suggestion{std::string(word), Discount(ratio, lambda, depth),
                      static_cast<int>(suffix.size()) + 1,
                      static_cast<int>(depth)};
  }
  const uint64_t count = model.table(1).Count(word);
  if (count == 0 || model.corpus_size() == 0) {
    return Suggestion{std::string(word), 0.0, 0,
                      static_cast<int>(context.size())};
  }
  const double base =
      static_cast<double>(count) / static_cast<double>(model.corpus_size());
  return Suggestion{std::string(word), Discount(base, lambda, context.size()),
                    1, static_cast<int>(context.size())};
}

double SboScore(const LanguageModel& model, std::string_view word,
                std::span<const std::string> context,
                const BackoffConfig& config) {
  return ScoreWord(model, word, context, config.lambda).score;
}

std::vector<Suggestion> RankNextWords(const LanguageModel& model,
                                      std::span<const std::string> context,
                                      const RankOptions& options) {
  if (options.k == 0) return {};
  context = TrimContext(model, context);
  const auto& markers = model.markers();
  auto admissible = [&](std::string_view word) {
    if (word == markers.begin) return false;
    if (word == markers.end && !options.include_end_marker) return false;
    return word.starts_with(options.prefix);
  };

  std::vector<Candidate> candidates;
  std::unordered_set<std::string_view> seen;
  const NGramTable& unigrams = model.table(1);

  const std::size_t levels =
      options.backoff ? context.size() : std::min<std::size_t>(context.size(), 1);
  for (std::size_t depth = 0; depth < levels; ++depth) {
    std::span<const std::string> suffix = context.subspan(depth);
    const uint64_t context_count = model.Count(suffix);
    if (context_count == 0) continue;
    for (const Successor& next : model.Successors(suffix)) {
      if (!admissible(next.word) || seen.contains(next.word)) continue;
      seen.insert(next.word);
      const double ratio = static_cast<double>(next.count) /
                           static_cast<double>(context_count);
      candidates.push_back(
          {Suggestion{next.word, Discount(ratio, options.lambda, depth),
                      static_cast<int>(suffix.size()) + 1,
                      static_cast<int>(depth)},
           unigrams.Count(next.word)});
    }
  }

  // Unigram level. Scores here are monotone in count, so the first k
  // admissible unseen words are the only ones that can make the cut.
  const bool use_unigrams =
      context.empty() ||
      (options.backoff && (candidates.empty() || options.fill_with_unigrams));
  if (use_unigrams && model.corpus_size() > 0) {
    const double n = static_cast<double>(model.corpus_size());
    std::size_t added = 0;
    for (const Successor& w : model.UnigramsByCount()) {
      if (added == options.k) break;
      if (!admissible(w.word) || seen.contains(w.word)) continue;
      candidates.push_back(
          {Suggestion{w.word,
                      Discount(static_cast<double>(w.count) / n,
                               options.lambda, context.size()),
                      1, static_cast<int>(context.size())},
           w.count});
      ++added;
    }
  }

  const std::size_t keep = std::min(options.k, candidates.size());
  std::partial_sort(candidates.begin(),
                    candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), Ranked);
  std::vector<Suggestion> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back(std::move(candidates[i].suggestion));
  }
  return out;
}

std::vector<Suggestion> Suggest(const LanguageModel& model,
                                std::span<const std::string> context,
                                std::size_t k, const BackoffConfig& config,
                                std::string_view prefix) {
  RankOptions options;
  options.lambda = config.lambda;
  options.k = k;
  options.prefix = prefix;
  return RankNextWords(model, context, options);
}

std::vector<Suggestion> Suggest(const LanguageModel& model,
                                const PredictionRequest& request,
                                const BackoffConfig& config,
                                const NormalizationConfig& normalization) {
  if (model.corpus_size() == 0) {
    throw Error(ErrorCode::kEmptyModel, "model has no counts");
  }
  const std::size_t k = request.k.value_or(config.k_suggestions);
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const std::vector<std::string> context =
      ContextTokens(request.context_text, normalization);
  std::string prefix;
  if (request.prefix) prefix = NormalizePrefix(*request.prefix, normalization);
  return Suggest(model, context, k, config, prefix);
}

std::vector<Suggestion> CompletePrefix(const LanguageModel& model,
                                       std::string_view prefix,
                                       std::size_t k) {
  if (prefix.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty prefix");
  }
  std::span<const Successor> words = model.UnigramsByWord();
  auto it = std::lower_bound(
      words.begin(), words.end(), prefix,
      [](const Successor& s, std::string_view p) { return s.word < p; });
  std::vector<Successor> matches;
  for (; it != words.end() && std::string_view(it->word).starts_with(prefix);
       ++it) {
    matches.push_back(*it);
  }
  std::sort(matches.begin(), matches.end(),
            [](const Successor& a, const Successor& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.word < b.word;
            });
  if (matches.size() > k) matches.resize(k);
  const double n = static_cast<double>(model.corpus_size());
  std::vector<Suggestion> out;
  out.reserve(matches.size());
  for (Successor& m : matches) {
    out.push_back({std::move(m.word), static_cast<double>(m.count) / n, 1, 0});
  }
  return out;
}

std::string ModelId(const LanguageModel& model) {
  Fnv1a64 h;
  h.Update(std::to_string(model.max_order()));
  h.Update(model.markers().begin);
  h.Update(" ");
  h.Update(model.markers().end);
  h.Update(ToHex(model.fingerprint()));
  for (int order = 1; order <= model.max_order(); ++order) {
    for (const NGramTable::Row& row : model.table(order).SortedRows()) {
      h.Update(row.key);
      h.Update("\t");
      h.Update(std::to_string(row.count));
      h.Update("\n");
    }
  }
  return ToHex(h.digest());
}

std::vector<Suggestion> Predict(const Engine& engine,
                                const PredictionRequest& request) {
  return Suggest(engine.model, request, engine.backoff, engine.normalization);
}

}  // namespace nextword
