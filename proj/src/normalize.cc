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

#include "nextword/normalize.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <utility>

#include "nextword/error.h"
#include "nextword/hash.h"
#include "nextword/utf8.h"

namespace nextword {
namespace {

struct Range {
  char32_t lo;
  char32_t hi;
};

constexpr std::array<Range, 5> kArabicLetters = {{
    {0x0600, 0x06FF},  // Arabic
    {0x0750, 0x077F},  // Arabic Supplement
    {0x08A0, 0x08FF},  // Arabic Extended-A
    {0xFB50, 0xFDFF},  // Presentation Forms-A
    {0xFE70, 0xFEFF},  // Presentation Forms-B
}};

constexpr std::array<Range, 13> kLatinLetters = {{
    {0x0041, 0x005A}, {0x0061, 0x007A}, {0x00AA, 0x00AA}, {0x00BA, 0x00BA},
    {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x024F},  // Latin-1, Ext-A/B
    {0x0250, 0x02AF},                                      // IPA
    {0x1E00, 0x1EFF},                                      // Ext Additional
    {0x2C60, 0x2C7F}, {0xA720, 0xA7FF}, {0xAB30, 0xAB6F},  // Ext-C/D/E
    {0xFF21, 0xFF5A},                                      // fullwidth
}};

template <std::size_t N>
bool InRanges(const std::array<Range, N>& ranges, char32_t cp) {
  return std::any_of(ranges.begin(), ranges.end(),
                     [cp](const Range& r) { return cp >= r.lo && cp <= r.hi; });
}

enum class CharClass { kSpace, kDigit, kPunct, kDrop, kLetter, kMark };

CharClass Classify(char32_t cp) {
  const auto c = static_cast<UChar32>(cp);
  if (u_isUWhiteSpace(c)) return CharClass::kSpace;
  switch (u_charType(c)) {
    case U_DECIMAL_DIGIT_NUMBER:
    case U_LETTER_NUMBER:
    case U_OTHER_NUMBER:
      return CharClass::kDigit;
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return CharClass::kPunct;
    case U_CONTROL_CHAR:
      return CharClass::kSpace;
    case U_FORMAT_CHAR:
    case U_PRIVATE_USE_CHAR:
    case U_SURROGATE:
    case U_UNASSIGNED:
      return CharClass::kDrop;
    case U_NON_SPACING_MARK:
    case U_ENCLOSING_MARK:
    case U_COMBINING_SPACING_MARK:
      return CharClass::kMark;
    default:
      return CharClass::kLetter;
  }
}

bool IsTerminator(char32_t cp, const NormalizationConfig& config) {
  if (config.line_breaks_end_sentences && (cp == U'\n' || cp == U'\r')) {
    return true;
  }
  return config.sentence_terminators.find(cp) != std::u32string::npos;
}

struct Segment {
  std::size_t begin;
  std::size_t end;
};

// Cuts `raw` at terminators. The last segment is whatever follows the final
// terminator and may be empty.
std::vector<Segment> SplitSegments(std::string_view raw,
                                   const NormalizationConfig& config) {
  std::vector<Segment> segments;
  const auto* s = reinterpret_cast<const uint8_t*>(raw.data());
  const int32_t length = static_cast<int32_t>(raw.size());
  int32_t i = 0;
  std::size_t seg_begin = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw Error(ErrorCode::kInvalidEncoding,
                  "ill-formed UTF-8 at byte offset " + std::to_string(start));
    }
    if (IsTerminator(static_cast<char32_t>(c), config)) {
      segments.push_back({seg_begin, static_cast<std::size_t>(i)});
      seg_begin = static_cast<std::size_t>(i);
    }
  }
  segments.push_back({seg_begin, raw.size()});
  return segments;
}

bool OutOfScript(std::u32string_view token, ScriptMode mode) {
  if (mode == ScriptMode::kMixed) return false;
  for (char32_t cp : token) {
    const bool arabic = IsArabicScriptLetter(cp);
    const bool latin = IsLatinScriptLetter(cp);
    switch (Classify(cp)) {
      case CharClass::kLetter:
        if (mode == ScriptMode::kArabic ? !arabic : !latin) return true;
        break;
      case CharClass::kMark:
        // Script-neutral combining marks are fine; marks from the other
        // script's block give the token away as foreign.
        if (mode == ScriptMode::kArabic ? latin : arabic) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

std::vector<std::string> TokenizeSegment(std::u32string_view text,
                                         const NormalizationConfig& config,
                                         CleanStats* stats) {
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (OutOfScript(current, config.script_mode)) {
      if (stats != nullptr) ++stats->dropped_tokens;
    } else {
      tokens.push_back(utf8::Encode(current));
    }
    current.clear();
  };
  for (char32_t cp : text) {
    if (IsTerminator(cp, config)) {
      flush();
      continue;
    }
    switch (Classify(cp)) {
      case CharClass::kSpace:
        flush();
        break;
      case CharClass::kDigit:
        if (config.strip_digits) {
          if (stats != nullptr) ++stats->removed_codepoints;
        } else {
          current.push_back(cp);
        }
        break;
      case CharClass::kPunct:
        if (config.strip_punctuation) {
          if (stats != nullptr) ++stats->removed_codepoints;
        } else {
          current.push_back(cp);
        }
        break;
      case CharClass::kDrop:
        if (stats != nullptr) ++stats->removed_codepoints;
        break;
      case CharClass::kLetter:
        if (config.lowercase_latin && IsLatinScriptLetter(cp)) {
          cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
        }
        current.push_back(cp);
        break;
      case CharClass::kMark:
        current.push_back(cp);
        break;
    }
  }
  flush();
  return tokens;
}

}  // namespace

bool IsArabicScriptLetter(char32_t cp) { return InRanges(kArabicLetters, cp); }
bool IsLatinScriptLetter(char32_t cp) { return InRanges(kLatinLetters, cp); }

std::string_view ScriptModeName(ScriptMode mode) {
  switch (mode) {
    case ScriptMode::kArabic: return "arabic";
    case ScriptMode::kLatin: return "latin";
    case ScriptMode::kMixed: return "mixed";
  }
  return "mixed";
}

ScriptMode ParseScriptMode(std::string_view name) {
  if (name == "arabic") return ScriptMode::kArabic;
  if (name == "latin") return ScriptMode::kLatin;
  if (name == "mixed") return ScriptMode::kMixed;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown script mode '" + std::string(name) + "'");
}

uint64_t Fingerprint(const NormalizationConfig& config) {
  Fnv1a64 h;
  h.Update("script=");
  h.Update(ScriptModeName(config.script_mode));
  h.Update(config.lowercase_latin ? ";lower=1" : ";lower=0");
  h.Update(config.strip_digits ? ";digits=1" : ";digits=0");
  h.Update(config.strip_punctuation ? ";punct=1" : ";punct=0");
  h.Update(config.line_breaks_end_sentences ? ";lines=1" : ";lines=0");
  h.Update(";term=");
  h.Update(utf8::Encode(config.sentence_terminators));
  h.Update(";map=");
  h.Update(config.codepoint_map.Serialize());
  return h.digest();
}

std::string Canonicalize(std::string_view raw,
                         const NormalizationConfig& config) {
  const std::u32string decoded = utf8::Decode(raw);
  if (config.codepoint_map.empty()) return std::string(raw);
  return utf8::Encode(config.codepoint_map.Apply(decoded));
}

std::vector<Sentence> CleanAndSegment(std::string_view raw,
                                      const NormalizationConfig& config,
                                      CleanStats* stats) {
  std::vector<Sentence> sentences;
  for (const Segment& seg : SplitSegments(raw, config)) {
    const std::u32string text =
        utf8::Decode(raw.substr(seg.begin, seg.end - seg.begin));
    std::vector<std::string> tokens = TokenizeSegment(text, config, stats);
    if (tokens.empty()) continue;
    if (stats != nullptr) {
      ++stats->sentences;
      stats->tokens += tokens.size();
    }
    sentences.push_back(Sentence{std::move(tokens), seg.begin, seg.end});
  }
  return sentences;
}

std::vector<Sentence> NormalizeText(std::string_view raw,
                                    const NormalizationConfig& config,
                                    CleanStats* stats) {
  return CleanAndSegment(Canonicalize(raw, config), config, stats);
}

std::vector<std::string> ContextTokens(std::string_view raw,
                                       const NormalizationConfig& config) {
  const std::string canonical = Canonicalize(raw, config);
  const std::vector<Segment> segments = SplitSegments(canonical, config);
  const Segment& last = segments.back();
  const std::u32string text =
      utf8::Decode(std::string_view(canonical).substr(last.begin,
                                                       last.end - last.begin));
  return TokenizeSegment(text, config, nullptr);
}

std::string NormalizePrefix(std::string_view prefix,
                            const NormalizationConfig& config) {
  std::u32string cps = utf8::Decode(Canonicalize(prefix, config));
  std::u32string out;
  for (char32_t cp : cps) {
    if (u_isUWhiteSpace(static_cast<UChar32>(cp))) continue;
    if (config.lowercase_latin && IsLatinScriptLetter(cp)) {
      cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
    }
    out.push_back(cp);
  }
  return utf8::Encode(out);
}

std::string RenderSentences(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const Sentence& s : sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i > 0) out += ' ';
      out += s.tokens[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace nextword
