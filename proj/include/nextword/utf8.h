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

#ifndef NEXTWORD_UTF8_H_
#define NEXTWORD_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace nextword::utf8 {

// Decodes `text` into codepoints. Throws Error(kInvalidEncoding) naming the
// byte offset of the first ill-formed sequence.
std::u32string Decode(std::string_view text);

bool IsValid(std::string_view text);

void Append(char32_t cp, std::string& out);
std::string Encode(std::u32string_view cps);

// "U+06A9" style rendering used in diagnostics and data files.
std::string FormatCodepoint(char32_t cp);

}  // namespace nextword::utf8

#endif  // NEXTWORD_UTF8_H_
