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

#include "ltadmm/rng.h"

#include "ltadmm/error.h"

namespace ltadmm {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidTopology: return "invalid-topology";
    case ErrorCode::kSelfLoop: return "self-loop";
    case ErrorCode::kDuplicateEdge: return "duplicate-edge";
    case ErrorCode::kDisconnected: return "disconnected";
    case ErrorCode::kInvalidBatch: return "invalid-batch";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kInfinitePrivacyCost: return "infinite-privacy-cost";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t master_seed, std::uint64_t agent,
                         std::uint64_t round, std::uint64_t step,
                         StreamPurpose purpose) {
  std::uint64_t h = SplitMix64(master_seed);
  h = SplitMix64(h ^ agent);
  h = SplitMix64(h ^ round);
  h = SplitMix64(h ^ step);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

RngStream MakeStream(std::uint64_t master_seed, std::uint64_t agent,
                     std::uint64_t round, std::uint64_t step,
                     StreamPurpose purpose) {
  return RngStream(DeriveSeed(master_seed, agent, round, step, purpose));
}

}  // namespace ltadmm
