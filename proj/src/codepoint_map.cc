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

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

#include "nextword/error.h"
#include "nextword/normalize.h"
#include "nextword/utf8.h"

namespace nextword {
namespace {

bool LooksLikeCodepointList(std::string_view field) {
  if (field.size() < 3) return false;
  return field.substr(0, 2) == "U+";
}

std::u32string ParseField(std::string_view field, const std::string& origin,
                          std::size_t line) {
  if (!LooksLikeCodepointList(field)) {
    if (!utf8::IsValid(field)) {
      throw Error(ErrorCode::kInvalidEncoding, "map entry is not UTF-8",
                  origin, line);
    }
    return utf8::Decode(field);
  }
  std::u32string out;
  std::size_t pos = 0;
  while (pos < field.size()) {
    std::size_t end = field.find(' ', pos);
    if (end == std::string_view::npos) end = field.size();
    std::string_view item = field.substr(pos, end - pos);
    if (item.size() < 3 || item.substr(0, 2) != "U+" || item.size() > 8) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad codepoint '" + std::string(item) + "'", origin, line);
    }
    char32_t cp = 0;
    for (char c : item.substr(2)) {
      int digit;
      if (c >= '0' && c <= '9') {
        digit = c - '0';
      } else if (c >= 'A' && c <= 'F') {
        digit = c - 'A' + 10;
      } else if (c >= 'a' && c <= 'f') {
        digit = c - 'a' + 10;
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "bad codepoint '" + std::string(item) + "'", origin, line);
      }
      cp = cp * 16 + static_cast<char32_t>(digit);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "codepoint out of range '" + std::string(item) + "'", origin,
                  line);
    }
    out.push_back(cp);
    pos = end + 1;
  }
  return out;
}

std::string FormatField(std::u32string_view cps) {
  std::string out;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (i > 0) out += ' ';
    out += utf8::FormatCodepoint(cps[i]);
  }
  return out;
}

}  // namespace

CodepointMap::CodepointMap(std::vector<MapEntry> entries)
    : entries_(std::move(entries)) {
  std::set<std::u32string> seen;
  for (const MapEntry& e : entries_) {
    if (e.source.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty map source");
    }
    if (!seen.insert(e.source).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate map source " + FormatField(e.source));
    }
  }
  by_length_.resize(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) by_length_[i] = i;
  std::stable_sort(by_length_.begin(), by_length_.end(),
                   [this](std::size_t a, std::size_t b) {
                     return entries_[a].source.size() >
                            entries_[b].source.size();
                   });
  // Every source must reach a fixpoint; Apply throws kCyclicMap otherwise.
  for (const MapEntry& e : entries_) Apply(e.source);
}

CodepointMap CodepointMap::Parse(std::string_view text,
                                 const std::string& origin) {
  std::vector<MapEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "expected source<TAB>replacement",
                  origin, line_no);
    }
    MapEntry entry;
    entry.source = ParseField(line.substr(0, tab), origin, line_no);
    entry.replacement = ParseField(line.substr(tab + 1), origin, line_no);
    if (entry.source.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty map source", origin,
                  line_no);
    }
    entries.push_back(std::move(entry));
  }
  return CodepointMap(std::move(entries));
}

CodepointMap CodepointMap::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open map file", path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return Parse(text, path.string());
}

CodepointMap CodepointMap::SoraniDefault() {
  return CodepointMap({
      {U"\u0643", U"\u06A9"},          // Arabic kaf -> keheh
      {U"\u064A", U"\u06CC"},          // Arabic yeh -> Farsi yeh
      {U"\u0649", U"\u06CC"},          // alef maksura -> Farsi yeh
      {U"\u0629", U"\u06D5"},          // teh marbuta -> ae
      {U"\u06C0", U"\u06D5"},          // heh with yeh above -> ae
      {U"\u0647\u200C", U"\u06D5"},    // heh + ZWNJ -> ae
      {U"\u06BE", U"\u0647"},          // heh doachashmee -> heh
      {U"\u0640", U""},                // tatweel
  });
}

std::string CodepointMap::Serialize() const {
  std::string out;
  for (const MapEntry& e : entries_) {
    out += FormatField(e.source);
    out += '\t';
    out += FormatField(e.replacement);
    out += '\n';
  }
  return out;
}

bool CodepointMap::ApplyOnce(std::u32string_view in, std::u32string& out) const {
  out.clear();
  bool changed = false;
  std::size_t i = 0;
  while (i < in.size()) {
    const MapEntry* hit = nullptr;
    for (std::size_t idx : by_length_) {
      const MapEntry& e = entries_[idx];
      if (e.source.size() <= in.size() - i &&
          in.compare(i, e.source.size(), e.source) == 0) {
        hit = &e;
        break;
      }
    }
    if (hit != nullptr) {
      out += hit->replacement;
      i += hit->source.size();
      changed = true;
    } else {
      out.push_back(in[i]);
      ++i;
    }
  }
  return changed;
}

std::u32string CodepointMap::Apply(std::u32string_view text) const {
  std::u32string current(text);
  if (entries_.empty()) return current;
  std::u32string next;
  // An acyclic chain of k rewrites settles within k passes.
  for (std::size_t pass = 0; pass <= entries_.size() + 1; ++pass) {
    if (!ApplyOnce(current, next) || next == current) return current;
    current.swap(next);
  }
  throw Error(ErrorCode::kCyclicMap,
              "codepoint map does not converge on " + FormatField(text));
}

}  // namespace nextword
