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

#ifndef LTADMM_RNG_H_
#define LTADMM_RNG_H_

#include <cstdint>
#include <random>

namespace ltadmm {

using RngStream = std::mt19937_64;

// What a substream is used for. Distinct purposes never share a stream.
enum class StreamPurpose : std::uint64_t {
  kMinibatch = 1,
  kNoise = 2,
  kData = 3,
  kProbe = 4,
};

// Counter-based substream derivation. The seed of a stream depends only on
// (master_seed, agent, round, step, purpose), never on scheduling order, so
// agents can be trained on any number of workers with identical results.
// Each field is folded in through a SplitMix64 finalizer.
std::uint64_t DeriveSeed(std::uint64_t master_seed, std::uint64_t agent,
                         std::uint64_t round, std::uint64_t step,
                         StreamPurpose purpose);

RngStream MakeStream(std::uint64_t master_seed, std::uint64_t agent,
                     std::uint64_t round, std::uint64_t step,
                     StreamPurpose purpose);

}  // namespace ltadmm

#endif  // LTADMM_RNG_H_
