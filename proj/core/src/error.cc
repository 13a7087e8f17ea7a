// Copyright 2026 The SRT Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "srt/error.h"

namespace srt {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kPreconditionViolated: return "PRECONDITION_VIOLATED";
    case ErrorCode::kMalformedAnnotation: return "MALFORMED_ANNOTATION";
    case ErrorCode::kGoldOutOfRange: return "GOLD_OUT_OF_RANGE";
    case ErrorCode::kRemoteUnavailable: return "REMOTE_UNAVAILABLE";
    case ErrorCode::kEmptyRationale: return "EMPTY_RATIONALE";
    case ErrorCode::kLengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::kNotABadCase: return "NOT_A_BAD_CASE";
    case ErrorCode::kTransportError: return "TRANSPORT_ERROR";
    case ErrorCode::kMalformedRecord: return "MALFORMED_RECORD";
  }
  return "UNKNOWN";
}

}  // namespace srt
