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

// Serial reference kernels versus their OpenMP counterparts on the bundled
// sample corpus: n-gram counting and top-k evaluation.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "nextword/eval.h"
#include "nextword/ngram_model.h"
#include "nextword/normalize.h"

namespace nextword {
namespace {

const std::vector<Sentence>& Corpus() {
  static const std::vector<Sentence> sentences = [] {
    std::ifstream in(NEXTWORD_SAMPLE_CORPUS, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return NormalizeText(text, NormalizationConfig{});
  }();
  return sentences;
}

void BM_CountSerial(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(CountNGramsSerial(Corpus(), order, {}));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(Corpus().size()));
}
BENCHMARK(BM_CountSerial)->DenseRange(1, 5, 2)->Unit(benchmark::kMillisecond);

void BM_CountParallel(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(CountNGrams(Corpus(), order, {}));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(Corpus().size()));
}
BENCHMARK(BM_CountParallel)
    ->ArgsProduct({{1, 3, 5}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);

const LanguageModel& Model() {
  static const LanguageModel model = BuildModel(Corpus(), BuildOptions{});
  return model;
}

std::span<const Sentence> TestSlice() {
  const std::span<const Sentence> all = Corpus();
  return all.last(all.size() / 10);
}

void BM_EvalSerial(benchmark::State& state) {
  EvalConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvaluateTopKSerial(Model(), TestSlice(), config));
  }
}
BENCHMARK(BM_EvalSerial)->Unit(benchmark::kMillisecond);

void BM_EvalParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  EvalConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvaluateTopK(Model(), TestSlice(), config));
  }
}
BENCHMARK(BM_EvalParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace nextword

BENCHMARK_MAIN();
