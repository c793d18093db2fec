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

#ifndef NEXTWORD_PERSISTENCE_H_
#define NEXTWORD_PERSISTENCE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nextword/ngram_model.h"
#include "nextword/normalize.h"
#include "nextword/predictor.h"

namespace nextword {

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kManifestName = "manifest";
inline constexpr std::string_view kMapFileName = "normalization.map";
inline constexpr std::string_view kTableHeader = "word\tfreq";

struct TableInfo {
  int order = 0;
  std::string filename;
  std::size_t rows = 0;
  uint64_t total = 0;
  uint64_t digest = 0;  // FNV-1a over the file bytes
};

struct ModelManifest {
  int format_version = kFormatVersion;
  int max_order = 0;
  double lambda = 0.4;
  uint64_t corpus_size = 0;
  BoundaryMarkers markers;
  uint64_t min_count = 1;
  uint64_t normalization_fingerprint = 0;
  ScriptMode script_mode = ScriptMode::kMixed;
  bool lowercase_latin = true;
  bool strip_digits = true;
  bool strip_punctuation = true;
  bool line_breaks_end_sentences = true;
  std::u32string sentence_terminators;
  std::string normalization_map;
  std::vector<TableInfo> tables;
  std::string created;  // UTC, ISO 8601; the only non-deterministic field
};

std::string TableFileName(int order);

// Header line, then one `key<TAB>count` row per n-gram sorted by count
// descending and key ascending. LF line endings, no byte-order mark.
std::string RenderTable(const NGramTable& table);

// Parses and structurally validates one table file. Every fault is reported
// as kCorruptRow with its 1-based line number.
struct ParsedTable {
  NGramTable table;
  StringMap<std::size_t> lines;  // key -> line number
};
ParsedTable ParseTable(std::string_view bytes, int order,
                       const BoundaryMarkers& markers,
                       const std::string& origin);

std::string RenderManifest(const ModelManifest& manifest);
ModelManifest ParseManifest(std::string_view text, const std::string& origin);

struct SaveOptions {
  bool overwrite = false;
  uint64_t min_count = 1;
};

// Writes `<n>-gram.tsv` for every order, the normalization map and the
// manifest. Throws kWriteCollision when a manifest already exists and
// overwrite is off, kIoFailure on write errors.
ModelManifest SaveModel(const LanguageModel& model,
                        const NormalizationConfig& normalization,
                        const BackoffConfig& backoff,
                        const std::filesystem::path& directory,
                        const SaveOptions& options = {});

struct LoadedModel {
  Engine engine;
  ModelManifest manifest;
  std::vector<std::string> warnings;  // e.g. fingerprint mismatch
};

// Throws kMissingFile, kVersionMismatch, kCorruptManifest,
// kRowCountMismatch or kCorruptRow (with path and line). A table whose bytes
// no longer match the manifest digest is rejected; cross-order count
// consistency is used to point at the damaged row.
LoadedModel LoadModel(const std::filesystem::path& directory);

}  // namespace nextword

#endif  // NEXTWORD_PERSISTENCE_H_
