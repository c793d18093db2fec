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

#ifndef NEXTWORD_ERROR_H_
#define NEXTWORD_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nextword {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidEncoding,
  kCyclicMap,
  kUnmappedCodepoint,
  kOrderOutOfRange,
  kMarkerCollision,
  kContextTooLong,
  kUndefinedDistribution,
  kEmptyModel,
  kEmptyTestSet,
  kInsufficientCorpus,
  kIoFailure,
  kMissingFile,
  kWriteCollision,
  kCorruptRow,
  kCorruptManifest,
  kRowCountMismatch,
  kVersionMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// Broad class of a failure, used to pick a process exit status.
enum class ErrorKind { kUsage, kData, kIo };

ErrorKind KindOf(ErrorCode code);

// The single exception type thrown by the library. `line` is 1-based and
// zero when the error is not tied to a line of an input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {},
        std::size_t line = 0);

  ErrorCode code() const { return code_; }
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  ErrorCode code_;
  std::string path_;
  std::size_t line_;
};

}  // namespace nextword

#endif  // NEXTWORD_ERROR_H_
