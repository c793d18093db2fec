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

#include "nextword/error.h"

#include <utility>

namespace nextword {
namespace {

std::string Decorate(ErrorCode code, const std::string& message,
                     const std::string& path, std::size_t line) {
  std::string out(ErrorCodeName(code));
  out += ": ";
  if (!path.empty()) {
    out += path;
    if (line > 0) out += ":" + std::to_string(line);
    out += ": ";
  } else if (line > 0) {
    out += "line " + std::to_string(line) + ": ";
  }
  out += message;
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidEncoding: return "InvalidEncoding";
    case ErrorCode::kCyclicMap: return "CyclicMap";
    case ErrorCode::kUnmappedCodepoint: return "UnmappedCodepoint";
    case ErrorCode::kOrderOutOfRange: return "OrderOutOfRange";
    case ErrorCode::kMarkerCollision: return "MarkerCollision";
    case ErrorCode::kContextTooLong: return "ContextTooLong";
    case ErrorCode::kUndefinedDistribution: return "UndefinedDistribution";
    case ErrorCode::kEmptyModel: return "EmptyModel";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kInsufficientCorpus: return "InsufficientCorpus";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kWriteCollision: return "WriteCollision";
    case ErrorCode::kCorruptRow: return "CorruptRow";
    case ErrorCode::kCorruptManifest: return "CorruptManifest";
    case ErrorCode::kRowCountMismatch: return "RowCountMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
  }
  return "Unknown";
}

ErrorKind KindOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOrderOutOfRange:
    case ErrorCode::kContextTooLong:
      return ErrorKind::kUsage;
    case ErrorCode::kIoFailure:
    case ErrorCode::kMissingFile:
    case ErrorCode::kWriteCollision:
      return ErrorKind::kIo;
    default:
      return ErrorKind::kData;
  }
}

Error::Error(ErrorCode code, const std::string& message, std::string path,
             std::size_t line)
    : std::runtime_error(Decorate(code, message, path, line)),
      code_(code),
      path_(std::move(path)),
      line_(line) {}

}  // namespace nextword
