// Copyright 2026 The lossmon Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace lossmon {

// Kept numerically in sync with lm_status in include/lossmon/lossmon.h.
enum class ErrorCode {
  kInvalidArgument = 1,
  kParse = 2,
  kUnknownSymbol = 3,
  kAlphabetMismatch = 4,
  kCapExceeded = 5,
  kSchema = 6,
  kIo = 7,
  kUnsupported = 8,
  kSessionPoisoned = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Regex syntax error; `position` is a byte offset into the pattern.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorCode::kParse,
              "parse error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace lossmon
