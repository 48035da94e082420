/*
 * Copyright 2026 The CEI Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cei/error.h"

namespace cei {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kDegenerateTail: return "DegenerateTail";
    case ErrorCode::kUnachievable: return "Unachievable";
    case ErrorCode::kKTooSmall: return "KTooSmall";
    case ErrorCode::kUndefinedRate: return "UndefinedRate";
    case ErrorCode::kZeroMeanRate: return "ZeroMeanRate";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string_view module, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + " [" +
                         std::string(module) + "]: " + message),
      code_(code),
      module_(module) {}

}  // namespace cei
