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

#include "nextword/persistence.h"

#include <unicode/uchar.h>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <utility>

#include "nextword/error.h"
#include "nextword/hash.h"
#include "nextword/utf8.h"

namespace nextword {
namespace fs = std::filesystem;
namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open", path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed", path.string());
  return bytes;
}

void WriteFile(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot open for writing", path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed", path.string());
}

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// Canonical unsigned decimal: no sign, no leading zeros, no overflow.
std::optional<uint64_t> ParseCount(std::string_view text) {
  if (text.empty() || text.size() > 20 || text.front() == '0') {
    return std::nullopt;
  }
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool TokenIsClean(std::string_view token) {
  if (token.empty()) return false;
  for (unsigned char b : token) {
    if (b < 0x20 || b == 0x7F) return false;
  }
  for (char32_t cp : utf8::Decode(token)) {
    if (u_isUWhiteSpace(static_cast<UChar32>(cp))) return false;
  }
  return true;
}

std::string CheckKey(std::string_view key, int order,
                     const BoundaryMarkers& markers) {
  if (!utf8::IsValid(key)) return "key is not valid UTF-8";
  const std::vector<std::string> tokens = SplitKey(key);
  if (static_cast<int>(tokens.size()) != order) {
    return "expected " + std::to_string(order) + " tokens, found " +
           std::to_string(tokens.size());
  }
  std::size_t leading_begin = 0;
  while (leading_begin < tokens.size() && tokens[leading_begin] == markers.begin) {
    ++leading_begin;
  }
  if (leading_begin > static_cast<std::size_t>(order - 1)) {
    return "too many begin markers";
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!TokenIsClean(tokens[i])) return "empty or malformed token";
    if (i >= leading_begin && tokens[i] == markers.begin) {
      return "begin marker after a word";
    }
    if (tokens[i] == markers.end && i + 1 != tokens.size()) {
      return "end marker before the last position";
    }
  }
  return {};
}

std::string Bool(bool v) { return v ? "true" : "false"; }

std::string FormatTerminators(std::u32string_view cps) {
  std::string out;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (i > 0) out += ' ';
    out += utf8::FormatCodepoint(cps[i]);
  }
  return out;
}

std::optional<std::u32string> ParseCodepointList(std::string_view text) {
  std::u32string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    pos = end + 1;
    if (item.size() < 3 || item.size() > 8 || item.substr(0, 2) != "U+") {
      return std::nullopt;
    }
    uint32_t cp = 0;
    auto [ptr, ec] =
        std::from_chars(item.data() + 2, item.data() + item.size(), cp, 16);
    if (ec != std::errc() || ptr != item.data() + item.size() ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return std::nullopt;
    }
    out.push_back(static_cast<char32_t>(cp));
  }
  return out;
}

// --- corruption localization ----------------------------------------------
//
// Counts across orders are redundant. For n >= 2 and every stored (n-1)-gram s
//   sum_w c_n(w s) = c_{n-1}(s)
// and for every (n-1)-gram p that can be followed by a word
//   sum_w c_n(p w) = c_{n-1}(p)   (a run of begin markers: the sentence count)
// and c_1 sums to N. A damaged row violates every relation it takes part in,
// while an intact row of the same table shares at most one violated group
// with it.

struct Marginals {
  StringMap<uint64_t> by_prefix;
  StringMap<uint64_t> by_suffix;
};

Marginals ComputeMarginals(const NGramTable& table) {
  Marginals m;
  for (const auto& [key, count] : table.entries()) {
    const std::size_t first = key.find(' ');
    const std::size_t last = key.rfind(' ');
    m.by_prefix[key.substr(0, last)] += count;
    m.by_suffix[key.substr(first + 1)] += count;
  }
  return m;
}

uint64_t Lookup(const StringMap<uint64_t>& map, std::string_view key) {
  auto it = map.find(key);
  return it == map.end() ? 0 : it->second;
}

std::size_t LocateDamagedRow(const std::vector<ParsedTable>& tables,
                             int order, uint64_t corpus_size,
                             const BoundaryMarkers& markers) {
  const int max_order = static_cast<int>(tables.size());
  const NGramTable& table = tables[static_cast<std::size_t>(order) - 1].table;
  const NGramTable& unigrams = tables.front().table;
  const uint64_t sentences = unigrams.Count(markers.end);

  std::optional<Marginals> here;
  std::optional<Marginals> above;
  if (order >= 2) here = ComputeMarginals(table);
  if (order < max_order) {
    above = ComputeMarginals(tables[static_cast<std::size_t>(order)].table);
  }
  const NGramTable* below =
      order >= 2 ? &tables[static_cast<std::size_t>(order) - 2].table : nullptr;

  auto all_begin = [&](std::string_view key) {
    for (const std::string& t : SplitKey(key)) {
      if (t != markers.begin) return false;
    }
    return true;
  };

  std::size_t best_line = 0;
  int best_score = -1;
  for (const auto& [key, count] : table.entries()) {
    int score = 0;
    const std::size_t first = key.find(' ');
    const std::size_t last = key.rfind(' ');
    const std::string_view word = std::string_view(key).substr(
        last == std::string::npos ? 0 : last + 1);
    if (above) {
      if (Lookup(above->by_suffix, key) != count) ++score;
      if (word != markers.end && Lookup(above->by_prefix, key) != count) {
        ++score;
      }
    }
    if (here) {
      const std::string_view prefix = std::string_view(key).substr(0, last);
      const std::string_view suffix = std::string_view(key).substr(first + 1);
      const uint64_t want_prefix =
          all_begin(prefix) ? sentences : below->Count(prefix);
      if (want_prefix == 0 || Lookup(here->by_prefix, prefix) != want_prefix) {
        ++score;
      }
      const uint64_t want_suffix = below->Count(suffix);
      if (want_suffix == 0 || Lookup(here->by_suffix, suffix) != want_suffix) {
        ++score;
      }
      for (const std::string& t : SplitKey(key)) {
        if (t != markers.begin && unigrams.Count(t) == 0) {
          ++score;
          break;
        }
      }
    } else if (unigrams.total() != corpus_size) {
      ++score;
    }
    const std::size_t line =
        tables[static_cast<std::size_t>(order) - 1].lines.find(key)->second;
    if (score > best_score || (score == best_score && line < best_line)) {
      best_score = score;
      best_line = line;
    }
  }
  // An empty table has only its header to blame.
  return best_line == 0 ? 1 : best_line;
}

}  // namespace

std::string TableFileName(int order) {
  return std::to_string(order) + "-gram.tsv";
}

std::string RenderTable(const NGramTable& table) {
  std::string out(kTableHeader);
  out += '\n';
  for (const NGramTable::Row& row : table.SortedRows()) {
    out += row.key;
    out += '\t';
    out += std::to_string(row.count);
    out += '\n';
  }
  return out;
}

ParsedTable ParseTable(std::string_view bytes, int order,
                       const BoundaryMarkers& markers,
                       const std::string& origin) {
  ParsedTable parsed{NGramTable(order), {}};
  auto fail = [&](std::size_t line, const std::string& why) -> Error {
    return Error(ErrorCode::kCorruptRow, why, origin, line);
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::string prev_key;
  uint64_t prev_count = 0;
  while (pos < bytes.size()) {
    ++line_no;
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) {
      throw fail(line_no, "missing final newline");
    }
    const std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    if (line_no == 1) {
      if (line != kTableHeader) throw fail(1, "bad header");
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw fail(line_no, "missing tab");
    if (line.find('\t', tab + 1) != std::string_view::npos) {
      throw fail(line_no, "more than one tab");
    }
    const std::string_view key = line.substr(0, tab);
    const std::optional<uint64_t> count = ParseCount(line.substr(tab + 1));
    if (!count) throw fail(line_no, "count is not a positive integer");
    if (std::string why = CheckKey(key, order, markers); !why.empty()) {
      throw fail(line_no, why);
    }
    if (parsed.lines.contains(key)) {
      throw fail(line_no, "duplicate key '" + std::string(key) + "'");
    }
    if (line_no > 2 && (*count > prev_count ||
                        (*count == prev_count && key <= prev_key))) {
      throw fail(line_no, "rows out of order");
    }
    parsed.lines.emplace(std::string(key), line_no);
    parsed.table.Add(key, *count);
    prev_key.assign(key);
    prev_count = *count;
  }
  if (line_no == 0) throw fail(1, "missing header");
  return parsed;
}

std::string RenderManifest(const ModelManifest& m) {
  std::string out = "# nextword model manifest\n";
  auto put = [&out](std::string_view key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("format_version", std::to_string(m.format_version));
  put("max_order", std::to_string(m.max_order));
  put("lambda", FormatDouble(m.lambda));
  put("corpus_size_N", std::to_string(m.corpus_size));
  put("begin_marker", m.markers.begin);
  put("end_marker", m.markers.end);
  put("min_count", std::to_string(m.min_count));
  put("normalization_fingerprint", ToHex(m.normalization_fingerprint));
  put("script_mode", std::string(ScriptModeName(m.script_mode)));
  put("lowercase_latin", Bool(m.lowercase_latin));
  put("strip_digits", Bool(m.strip_digits));
  put("strip_punctuation", Bool(m.strip_punctuation));
  put("line_breaks_end_sentences", Bool(m.line_breaks_end_sentences));
  put("sentence_terminators", FormatTerminators(m.sentence_terminators));
  put("normalization_map", m.normalization_map);
  for (const TableInfo& t : m.tables) {
    const std::string n = std::to_string(t.order);
    put("table." + n, t.filename);
    put("rows." + n, std::to_string(t.rows));
    put("total." + n, std::to_string(t.total));
    put("digest." + n, ToHex(t.digest));
  }
  put("created", m.created);
  return out;
}

ModelManifest ParseManifest(std::string_view text, const std::string& origin) {
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find(" = ");
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kCorruptManifest, "expected 'key = value'",
                  origin, line_no);
    }
    std::string key(line.substr(0, eq));
    if (!kv.emplace(key, std::make_pair(std::string(line.substr(eq + 3)),
                                        line_no))
             .second) {
      throw Error(ErrorCode::kCorruptManifest, "duplicate key '" + key + "'",
                  origin, line_no);
    }
  }

  auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw Error(ErrorCode::kCorruptManifest, "missing key '" + key + "'",
                  origin);
    }
    return it->second;
  };
  auto bad = [&](const std::string& key) {
    return Error(ErrorCode::kCorruptManifest, "bad value for '" + key + "'",
                 origin, get(key).second);
  };
  auto get_u64 = [&](const std::string& key) {
    const std::string& v = get(key).first;
    if (v == "0") return uint64_t{0};
    std::optional<uint64_t> parsed = ParseCount(v);
    if (!parsed) throw bad(key);
    return *parsed;
  };
  auto get_bool = [&](const std::string& key) {
    const std::string& v = get(key).first;
    if (v == "true") return true;
    if (v == "false") return false;
    throw bad(key);
  };
  auto get_hex = [&](const std::string& key) {
    uint64_t v = 0;
    if (!ParseHex(get(key).first, v)) throw bad(key);
    return v;
  };

  ModelManifest m;
  const uint64_t version = get_u64("format_version");
  if (version != static_cast<uint64_t>(kFormatVersion)) {
    throw Error(ErrorCode::kVersionMismatch,
                "format_version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kFormatVersion) + ")",
                origin, get("format_version").second);
  }
  m.format_version = kFormatVersion;
  const uint64_t max_order = get_u64("max_order");
  if (max_order < 1 || max_order > static_cast<uint64_t>(kMaxOrder)) {
    throw bad("max_order");
  }
  m.max_order = static_cast<int>(max_order);
  {
    const std::string& v = get("lambda").first;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), m.lambda);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw bad("lambda");
  }
  m.corpus_size = get_u64("corpus_size_N");
  m.markers.begin = get("begin_marker").first;
  m.markers.end = get("end_marker").first;
  if (!TokenIsClean(m.markers.begin) || !TokenIsClean(m.markers.end) ||
      m.markers.begin == m.markers.end) {
    throw bad("begin_marker");
  }
  m.min_count = get_u64("min_count");
  m.normalization_fingerprint = get_hex("normalization_fingerprint");
  try {
    m.script_mode = ParseScriptMode(get("script_mode").first);
  } catch (const Error&) {
    throw bad("script_mode");
  }
  m.lowercase_latin = get_bool("lowercase_latin");
  m.strip_digits = get_bool("strip_digits");
  m.strip_punctuation = get_bool("strip_punctuation");
  m.line_breaks_end_sentences = get_bool("line_breaks_end_sentences");
  {
    std::optional<std::u32string> cps =
        ParseCodepointList(get("sentence_terminators").first);
    if (!cps) throw bad("sentence_terminators");
    m.sentence_terminators = std::move(*cps);
  }
  m.normalization_map = get("normalization_map").first;
  for (int n = 1; n <= m.max_order; ++n) {
    const std::string s = std::to_string(n);
    TableInfo t;
    t.order = n;
    t.filename = get("table." + s).first;
    if (t.filename.empty() || t.filename.find('/') != std::string::npos) {
      throw bad("table." + s);
    }
    t.rows = static_cast<std::size_t>(get_u64("rows." + s));
    t.total = get_u64("total." + s);
    t.digest = get_hex("digest." + s);
    m.tables.push_back(std::move(t));
  }
  m.created = get("created").first;
  return m;
}

ModelManifest SaveModel(const LanguageModel& model,
                        const NormalizationConfig& normalization,
                        const BackoffConfig& backoff,
                        const fs::path& directory, const SaveOptions& options) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure, "cannot create directory: " + ec.message(),
                directory.string());
  }
  const fs::path manifest_path = directory / kManifestName;
  if (!options.overwrite && fs::exists(manifest_path)) {
    throw Error(ErrorCode::kWriteCollision,
                "a model already exists here (use overwrite)",
                directory.string());
  }

  ModelManifest m;
  m.max_order = model.max_order();
  m.lambda = backoff.lambda;
  m.corpus_size = model.corpus_size();
  m.markers = model.markers();
  m.min_count = options.min_count;
  m.normalization_fingerprint = Fingerprint(normalization);
  m.script_mode = normalization.script_mode;
  m.lowercase_latin = normalization.lowercase_latin;
  m.strip_digits = normalization.strip_digits;
  m.strip_punctuation = normalization.strip_punctuation;
  m.line_breaks_end_sentences = normalization.line_breaks_end_sentences;
  m.sentence_terminators = normalization.sentence_terminators;
  m.normalization_map = std::string(kMapFileName);

  for (int n = 1; n <= model.max_order(); ++n) {
    const NGramTable& table = model.table(n);
    TableInfo info;
    info.order = n;
    info.filename = TableFileName(n);
    info.rows = table.size();
    info.total = table.total();
    const std::string bytes = RenderTable(table);
    info.digest = HashBytes(bytes);
    WriteFile(directory / info.filename, bytes);
    m.tables.push_back(std::move(info));
  }
  WriteFile(directory / kMapFileName,
            "# codepoint map used to build this model\n" +
                normalization.codepoint_map.Serialize());
  m.created = UtcNow();
  WriteFile(manifest_path, RenderManifest(m));
  return m;
}

LoadedModel LoadModel(const fs::path& directory) {
  const fs::path manifest_path = directory / kManifestName;
  ModelManifest m =
      ParseManifest(ReadFile(manifest_path), manifest_path.string());

  NormalizationConfig norm;
  norm.script_mode = m.script_mode;
  norm.lowercase_latin = m.lowercase_latin;
  norm.strip_digits = m.strip_digits;
  norm.strip_punctuation = m.strip_punctuation;
  norm.line_breaks_end_sentences = m.line_breaks_end_sentences;
  norm.sentence_terminators = m.sentence_terminators;
  {
    const fs::path map_path = directory / m.normalization_map;
    const std::string text = ReadFile(map_path);
    try {
      norm.codepoint_map = CodepointMap::Parse(text, map_path.string());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInvalidArgument) throw;
      throw Error(ErrorCode::kCorruptManifest, e.what(), map_path.string());
    }
  }

  std::vector<ParsedTable> parsed;
  std::vector<int> damaged;
  for (const TableInfo& info : m.tables) {
    const fs::path path = directory / info.filename;
    const std::string bytes = ReadFile(path);
    parsed.push_back(ParseTable(bytes, info.order, m.markers, path.string()));
    if (parsed.back().table.size() != info.rows) {
      throw Error(ErrorCode::kRowCountMismatch,
                  "manifest lists " + std::to_string(info.rows) +
                      " rows, file has " +
                      std::to_string(parsed.back().table.size()),
                  path.string());
    }
    if (HashBytes(bytes) != info.digest) damaged.push_back(info.order);
  }
  if (!damaged.empty()) {
    const int order = damaged.front();
    const std::size_t line =
        LocateDamagedRow(parsed, order, m.corpus_size, m.markers);
    throw Error(ErrorCode::kCorruptRow,
                "contents do not match the manifest digest; row is "
                "inconsistent with the other tables",
                (directory / m.tables[static_cast<std::size_t>(order) - 1].filename)
                    .string(),
                line);
  }
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].table.total() != m.tables[i].total) {
      throw Error(ErrorCode::kCorruptManifest,
                  "total." + std::to_string(i + 1) + " disagrees with table",
                  manifest_path.string());
    }
  }
  if (parsed.front().table.total() != m.corpus_size) {
    throw Error(ErrorCode::kCorruptManifest,
                "corpus_size_N disagrees with the order-1 table",
                manifest_path.string());
  }

  LoadedModel loaded{
      Engine{LanguageModel(
                 [&] {
                   std::vector<NGramTable> tables;
                   for (ParsedTable& p : parsed) {
                     tables.push_back(std::move(p.table));
                   }
                   return tables;
                 }(),
                 m.markers, m.normalization_fingerprint),
             std::move(norm), BackoffConfig{m.lambda, 5}, {}},
      std::move(m),
      {}};
  loaded.engine.model_id = ModelId(loaded.engine.model);
  if (Fingerprint(loaded.engine.normalization) !=
      loaded.manifest.normalization_fingerprint) {
    loaded.warnings.push_back(
        "normalization fingerprint mismatch: the stored map or options differ "
        "from those the model was built with");
  }
  loaded.engine.backoff.Validate();
  return loaded;
}

}  // namespace nextword
