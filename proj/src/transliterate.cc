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

#include <optional>
#include <string>
#include <vector>

#include "nextword/error.h"
#include "nextword/normalize.h"
#include "nextword/utf8.h"

namespace nextword {
namespace {

// A letter (or the وو digraph) with its Latin reading(s). `vowel` is the
// vowel reading; `consonant` is used when the next letter reads as a vowel.
struct Unit {
  std::string_view vowel;
  std::optional<std::string_view> consonant;
  bool fixed_vowel = false;
};

std::optional<Unit> LookupSingle(char32_t cp) {
  switch (cp) {
    // One-to-one.
    case U'ا': return Unit{"a", std::nullopt, true};
    case U'ب': return Unit{"b", std::nullopt};
    case U'ج': return Unit{"c", std::nullopt};
    case U'چ': return Unit{"ç", std::nullopt};
    case U'د': return Unit{"d", std::nullopt};
    case U'ێ': return Unit{"ê", std::nullopt, true};
    case U'ف': return Unit{"f", std::nullopt};
    case U'گ': return Unit{"g", std::nullopt};
    case U'ژ': return Unit{"j", std::nullopt};
    case U'ک': return Unit{"k", std::nullopt};
    case U'ل': return Unit{"l", std::nullopt};
    case U'م': return Unit{"m", std::nullopt};
    case U'ن': return Unit{"n", std::nullopt};
    case U'ۆ': return Unit{"o", std::nullopt, true};
    case U'پ': return Unit{"p", std::nullopt};
    case U'ق': return Unit{"q", std::nullopt};
    case U'ر': return Unit{"r", std::nullopt};
    case U'س': return Unit{"s", std::nullopt};
    case U'ش': return Unit{"ş", std::nullopt};
    case U'ت': return Unit{"t", std::nullopt};
    case U'ڤ': return Unit{"v", std::nullopt};
    case U'خ': return Unit{"x", std::nullopt};
    case U'ز': return Unit{"z", std::nullopt};
    case U'ە': return Unit{"e", std::nullopt, true};
    // One-to-two.
    case U'ئ': return Unit{"i", "", false};
    case U'و': return Unit{"u", "w", false};
    case U'ی': return Unit{"î", "y", false};
    case U'ه': return Unit{"e", "h", false};
    // No Latin letter; nearest rendering.
    case U'ڕ': return Unit{"rr", std::nullopt};
    case U'ڵ': return Unit{"l", std::nullopt};
    case U'ع': return Unit{"e", std::nullopt};
    case U'غ': return Unit{"x", std::nullopt};
    case U'ح': return Unit{"h", std::nullopt};
    default: return std::nullopt;
  }
}

bool IsSilent(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x0652) ||  // harakat
         cp == 0x0654 || cp == 0x0640 ||    // hamza above, tatweel
         cp == 0x200C || cp == 0x200D;      // ZWNJ, ZWJ
}

}  // namespace

std::string TransliterateWord(std::string_view token) {
  const std::u32string cps = utf8::Decode(token);
  std::vector<Unit> units;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (IsSilent(cp)) continue;
    if (cp == U'و' && i + 1 < cps.size() && cps[i + 1] == U'و') {
      units.push_back(Unit{"û", std::nullopt, true});  // وو
      ++i;
      continue;
    }
    std::optional<Unit> unit = LookupSingle(cp);
    if (!unit) {
      throw Error(ErrorCode::kUnmappedCodepoint,
                  utf8::FormatCodepoint(cp) + " in token '" +
                      std::string(token) + "'");
    }
    units.push_back(*unit);
  }

  // Resolve right to left: a letter's reading depends on whether the
  // following letter was itself read as a vowel.
  std::vector<std::string_view> readings(units.size());
  bool next_is_vowel = false;
  for (std::size_t j = units.size(); j-- > 0;) {
    const Unit& u = units[j];
    bool is_vowel;
    if (u.consonant && next_is_vowel) {
      readings[j] = *u.consonant;
      is_vowel = false;
    } else {
      readings[j] = u.vowel;
      is_vowel = u.fixed_vowel || u.consonant.has_value();
    }
    next_is_vowel = is_vowel;
  }
  std::string out;
  for (std::string_view r : readings) out += r;
  return out;
}

std::vector<std::string> TransliterateSoraniToLatin(
    const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(TransliterateWord(t));
  return out;
}

}  // namespace nextword
