// Copyright 2026 The LT-ADMM-DP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LTADMM_ERROR_H_
#define LTADMM_ERROR_H_

#include <stdexcept>
#include <string>

namespace ltadmm {

enum class ErrorCode {
  kInvalidTopology,
  kSelfLoop,
  kDuplicateEdge,
  kDisconnected,
  kInvalidBatch,
  kDomain,
  kDimensionMismatch,
  kInfinitePrivacyCost,
  kProtocol,
  kDivergence,
  kConfig,
  kInternal,
};

const char* ErrorCodeName(ErrorCode code);

// Base exception for every failure raised by the library. The code lets
// callers (and tests) distinguish error cases without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ltadmm

#endif  // LTADMM_ERROR_H_
