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

#ifndef CEI_ERROR_H_
#define CEI_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cei {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  // Ingestion.
  kMalformedRow,
  kUnknownKind,
  kNonFiniteScore,
  kEmptyFile,
  // Distributions.
  kEmptyInput,
  kOutOfRange,
  kGridMismatch,
  kDegenerateTail,
  // Error rates and metrics.
  kUnachievable,
  kKTooSmall,
  kUndefinedRate,
  kZeroMeanRate,
  // Configuration.
  kInvalidSpec,
  kInvalidConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries a code and the module that
// raised it, so the CLI can surface provenance in its diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string_view module, const std::string& message);

  ErrorCode code() const { return code_; }
  const std::string& module() const { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace cei

#endif  // CEI_ERROR_H_
