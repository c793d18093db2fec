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

#include <omp.h>

#include <string>
#include <vector>

#include "nextword/error.h"
#include "nextword/ngram_model.h"

namespace nextword {
namespace {

void CheckArguments(std::span<const Sentence> sentences, int n,
                    const BoundaryMarkers& markers) {
  if (n < 1 || n > kMaxOrder) {
    throw Error(ErrorCode::kOrderOutOfRange,
                "order " + std::to_string(n) + " outside 1.." +
                    std::to_string(kMaxOrder));
  }
  const long long count = static_cast<long long>(sentences.size());
  long long collision = -1;
#pragma omp parallel for reduction(max : collision) schedule(static)
  for (long long i = 0; i < count; ++i) {
    for (const std::string& t : sentences[static_cast<std::size_t>(i)].tokens) {
      if (t == markers.begin || t == markers.end) collision = i;
    }
  }
  if (collision >= 0) {
    throw Error(ErrorCode::kMarkerCollision,
                "sentence " + std::to_string(collision + 1) +
                    " contains a boundary marker token");
  }
}

// Counts the windows of one padded sentence into `table`. `padded` is
// scratch space reused across calls.
void CountSentence(const Sentence& sentence, int n,
                   const BoundaryMarkers& markers,
                   std::vector<std::string>& padded, NGramTable& table) {
  const auto width = static_cast<std::size_t>(n);
  padded.assign(width - 1, markers.begin);
  padded.insert(padded.end(), sentence.tokens.begin(), sentence.tokens.end());
  padded.push_back(markers.end);
  std::string key;
  for (std::size_t i = 0; i + width <= padded.size(); ++i) {
    key.clear();
    for (std::size_t j = 0; j < width; ++j) {
      if (j > 0) key += ' ';
      key += padded[i + j];
    }
    table.Add(key);
  }
}

}  // namespace

NGramTable CountNGramsSerial(std::span<const Sentence> sentences, int n,
                             const BoundaryMarkers& markers) {
  CheckArguments(sentences, n, markers);
  NGramTable table(n);
  std::vector<std::string> padded;
  for (const Sentence& s : sentences) {
    CountSentence(s, n, markers, padded, table);
  }
  return table;
}

NGramTable CountNGrams(std::span<const Sentence> sentences, int n,
                       const BoundaryMarkers& markers) {
  CheckArguments(sentences, n, markers);
  const int threads = omp_get_max_threads();
  std::vector<NGramTable> shards(static_cast<std::size_t>(threads),
                                 NGramTable(n));
  const long long count = static_cast<long long>(sentences.size());
#pragma omp parallel num_threads(threads)
  {
    NGramTable& local = shards[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<std::string> padded;
#pragma omp for schedule(static)
    for (long long i = 0; i < count; ++i) {
      CountSentence(sentences[static_cast<std::size_t>(i)], n, markers,
                    padded, local);
    }
  }
  // Merge is pointwise addition, so the result does not depend on the
  // thread count or shard order.
  NGramTable merged = std::move(shards.front());
  for (std::size_t t = 1; t < shards.size(); ++t) merged.Merge(shards[t]);
  return merged;
}

}  // namespace nextword
