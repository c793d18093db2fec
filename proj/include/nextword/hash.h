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

#ifndef NEXTWORD_HASH_H_
#define NEXTWORD_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace nextword {

// 64-bit FNV-1a. Any single-byte substitution in the input changes the
// digest, which is what the table-file integrity check relies on.
class Fnv1a64 {
 public:
  void Update(std::string_view bytes);
  uint64_t digest() const { return state_; }

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

uint64_t HashBytes(std::string_view bytes);

std::string ToHex(uint64_t value);
// Returns false unless `text` is exactly 16 lowercase hex digits.
bool ParseHex(std::string_view text, uint64_t& value);

}  // namespace nextword

#endif  // NEXTWORD_HASH_H_
