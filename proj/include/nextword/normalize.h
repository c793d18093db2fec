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

#ifndef NEXTWORD_NORMALIZE_H_
#define NEXTWORD_NORMALIZE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nextword {

struct MapEntry {
  std::u32string source;
  std::u32string replacement;  // may be empty: the source is deleted
};

// An ordered list of codepoint-sequence rewrites. Application is a
// left-to-right longest-match pass repeated to a fixpoint, so the result is
// stable under re-application. A map whose closure does not converge is
// rejected with kCyclicMap.
class CodepointMap {
 public:
  CodepointMap() = default;
  explicit CodepointMap(std::vector<MapEntry> entries);

  // Map file format: one `source<TAB>replacement` per line, `#` starts a
  // comment line, blank lines ignored. Each side is either literal UTF-8 or
  // a space-separated list of `U+XXXX` codepoints.
  static CodepointMap Parse(std::string_view text, const std::string& origin);
  static CodepointMap LoadFile(const std::filesystem::path& path);

  // Arabic kaf/yeh/heh variants and tatweel folded to Kurdish forms.
  static CodepointMap SoraniDefault();

  // Writes every entry in `U+XXXX` form; Parse(Serialize()) is lossless.
  std::string Serialize() const;

  std::u32string Apply(std::u32string_view text) const;

  const std::vector<MapEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  // Returns true when at least one rewrite happened.
  bool ApplyOnce(std::u32string_view in, std::u32string& out) const;

  std::vector<MapEntry> entries_;
  // Indices into entries_, sorted by source length descending.
  std::vector<std::size_t> by_length_;
};

enum class ScriptMode { kArabic, kLatin, kMixed };

std::string_view ScriptModeName(ScriptMode mode);
// Accepts "arabic", "latin", "mixed"; throws kInvalidArgument otherwise.
ScriptMode ParseScriptMode(std::string_view name);

struct NormalizationConfig {
  ScriptMode script_mode = ScriptMode::kMixed;
  CodepointMap codepoint_map;
  bool lowercase_latin = true;
  bool strip_digits = true;
  bool strip_punctuation = true;
  std::u32string sentence_terminators = U".!?\u061F\u06D4\u0589";
  // LF and CR also close a sentence, so cleaned output (one sentence per
  // line) segments back to the same sentences.
  bool line_breaks_end_sentences = true;
};

// Hash over every field that influences tokenization.
uint64_t Fingerprint(const NormalizationConfig& config);

struct Sentence {
  std::vector<std::string> tokens;
  // Byte offsets [begin, end) of the segment in the text it was cut from.
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct CleanStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t dropped_tokens = 0;     // out-of-script, dropped wholesale
  std::size_t removed_codepoints = 0; // digits, punctuation, format chars
};

// Validates UTF-8 and applies the codepoint map.
std::string Canonicalize(std::string_view raw, const NormalizationConfig& config);

// Splits on sentence terminators first, then cleans each segment into
// tokens. Segments that end up empty are discarded.
std::vector<Sentence> CleanAndSegment(std::string_view raw,
                                      const NormalizationConfig& config,
                                      CleanStats* stats = nullptr);

// Canonicalize + CleanAndSegment.
std::vector<Sentence> NormalizeText(std::string_view raw,
                                    const NormalizationConfig& config,
                                    CleanStats* stats = nullptr);

// Tokens of the sentence still open at the end of `raw`, i.e. what a
// predictor should condition on. Empty when `raw` ends with a terminator.
std::vector<std::string> ContextTokens(std::string_view raw,
                                       const NormalizationConfig& config);

// Canonicalized, lowercased (per config) form of a word prefix with
// surrounding whitespace removed.
std::string NormalizePrefix(std::string_view prefix,
                            const NormalizationConfig& config);

// One sentence per line, tokens separated by single spaces.
std::string RenderSentences(const std::vector<Sentence>& sentences);

bool IsArabicScriptLetter(char32_t cp);
bool IsLatinScriptLetter(char32_t cp);

// Sorani (Arabic-script) to Kurmanji-style Latin. Letters with two Latin
// readings (و u/w, ی î/y, ه e/h, ئ i/silent) take the consonant reading when
// the next letter is read as a vowel and the vowel reading otherwise;
// readings are resolved from the end of the word backwards. Throws
// kUnmappedCodepoint for letters outside the tables.
std::string TransliterateWord(std::string_view token);
std::vector<std::string> TransliterateSoraniToLatin(
    const std::vector<std::string>& tokens);

}  // namespace nextword

#endif  // NEXTWORD_NORMALIZE_H_
