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

#ifndef LTADMM_DATA_H_
#define LTADMM_DATA_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ltadmm/rng.h"

namespace ltadmm {

// One agent's local dataset. Row h of `features` is a_{i,h}; labels are +-1.
struct LocalShard {
  Eigen::MatrixXd features;
  std::vector<int> labels;

  int size() const { return static_cast<int>(labels.size()); }
  int dim() const { return static_cast<int>(features.cols()); }
};

// Throws kDomain unless rows == labels, size >= 1, labels in {-1,+1} and
// features are finite.
void ValidateShard(const LocalShard& shard);

struct SyntheticOptions {
  int n_agents = 10;
  int samples_per_agent = 1000;
  int dim = 5;
  // Label rule b = sign(separation * <a, w*> + xi), xi ~ N(0,1). Infinity
  // gives clean, linearly separable labels; 0 gives pure coin flips.
  double separation = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 42;
  // Std of a per-agent feature mean shift; 0 keeps shards identically
  // distributed.
  double heterogeneity = 0.0;
  // Size of the held-out pool relative to samples_per_agent.
  double test_fraction = 0.2;
};

struct SyntheticData {
  std::vector<LocalShard> train;
  std::vector<LocalShard> test;
  // Unit-norm separator used to label the data.
  Eigen::VectorXd ground_truth;
};

// Features are drawn in antithetic pairs (a, 2*mu_i - a) with negated label
// noise, so with heterogeneity = 0 every shard has an exactly balanced label
// split (off by one when the shard size is odd). Deterministic given seed.
SyntheticData GenerateSynthetic(const SyntheticOptions& options);

struct Minibatch {
  // Distinct, ascending.
  std::vector<int> indices;
};

// Uniform sampling without replacement (Floyd's algorithm): every subset of
// size batch_size is equally likely. Requires 0 < batch_size < dataset_size,
// else throws kInvalidBatch.
Minibatch SampleMinibatch(int dataset_size, int batch_size,
                          RngStream& stream);

// Reads one agent's shard from CSV rows `b,a_1,...,a_n`. Blank lines and
// lines starting with '#' are skipped. Throws kConfig with file:line context.
LocalShard LoadCsvShard(const std::string& path);

}  // namespace ltadmm

#endif  // LTADMM_DATA_H_
