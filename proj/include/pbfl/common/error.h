/*
 * Copyright 2026 The PBFL Lab Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PBFL_COMMON_ERROR_H_
#define PBFL_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace pbfl {

enum class ErrorCode {
  kInvalidArgument,
  kFailedPrecondition,  // contract violations: depth budget, scale mismatch
  kProtocol,            // share mismatch, malformed or dropped messages
  kIo,
  kInternal,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Error InvalidArgument(const std::string& m) {
  return Error(ErrorCode::kInvalidArgument, m);
}
inline Error FailedPrecondition(const std::string& m) {
  return Error(ErrorCode::kFailedPrecondition, m);
}
inline Error ProtocolError(const std::string& m) {
  return Error(ErrorCode::kProtocol, m);
}
inline Error IoError(const std::string& m) { return Error(ErrorCode::kIo, m); }
inline Error InternalError(const std::string& m) {
  return Error(ErrorCode::kInternal, m);
}

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "INVALID_ARGUMENT";
    case ErrorCode::kFailedPrecondition:
      return "FAILED_PRECONDITION";
    case ErrorCode::kProtocol:
      return "PROTOCOL";
    case ErrorCode::kIo:
      return "IO";
    case ErrorCode::kInternal:
      return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace pbfl

#endif  // PBFL_COMMON_ERROR_H_
