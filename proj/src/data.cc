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

#include "ltadmm/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ltadmm/error.h"

namespace ltadmm {

namespace {

// Agent id reserved for streams not owned by any agent.
constexpr std::uint64_t kGlobalStreamId = ~std::uint64_t{0};

Eigen::VectorXd StandardNormal(int dim, RngStream& stream) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int l = 0; l < dim; ++l) v(l) = normal(stream);
  return v;
}

int Label(double separation, double margin, double noise) {
  if (std::isinf(separation)) return margin >= 0.0 ? 1 : -1;
  return separation * margin + noise >= 0.0 ? 1 : -1;
}

LocalShard DrawShard(int count, const Eigen::VectorXd& mean,
                     const Eigen::VectorXd& w_star, double separation,
                     RngStream& stream) {
  const int dim = static_cast<int>(mean.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  LocalShard shard;
  shard.features.resize(count, dim);
  shard.labels.resize(count);
  for (int h = 0; h < count; h += 2) {
    const Eigen::VectorXd a = mean + StandardNormal(dim, stream);
    const double xi = normal(stream);
    shard.features.row(h) = a.transpose();
    shard.labels[h] = Label(separation, a.dot(w_star), xi);
    if (h + 1 < count) {
      const Eigen::VectorXd mirrored = 2.0 * mean - a;
      shard.features.row(h + 1) = mirrored.transpose();
      shard.labels[h + 1] = Label(separation, mirrored.dot(w_star), -xi);
    }
  }
  return shard;
}

}  // namespace

void ValidateShard(const LocalShard& shard) {
  if (shard.labels.empty()) {
    throw Error(ErrorCode::kDomain, "shard is empty");
  }
  if (shard.features.rows() != static_cast<Eigen::Index>(shard.labels.size())) {
    throw Error(ErrorCode::kDomain, "shard feature/label count mismatch");
  }
  for (int b : shard.labels) {
    if (b != 1 && b != -1) {
      throw Error(ErrorCode::kDomain, "label must be -1 or +1");
    }
  }
  if (!shard.features.allFinite()) {
    throw Error(ErrorCode::kDomain, "shard has non-finite features");
  }
}

SyntheticData GenerateSynthetic(const SyntheticOptions& options) {
  if (options.n_agents < 1 || options.samples_per_agent < 1 ||
      options.dim < 1) {
    throw Error(ErrorCode::kDomain, "synthetic data sizes must be positive");
  }
  if (std::isnan(options.separation) || options.separation < 0.0 ||
      options.heterogeneity < 0.0 || options.test_fraction < 0.0) {
    throw Error(ErrorCode::kDomain,
                "separation, heterogeneity and test_fraction must be >= 0");
  }
  SyntheticData data;
  {
    RngStream stream = MakeStream(options.seed, kGlobalStreamId, 0, 0,
                                  StreamPurpose::kData);
    Eigen::VectorXd w = StandardNormal(options.dim, stream);
    while (w.norm() == 0.0) w = StandardNormal(options.dim, stream);
    data.ground_truth = w / w.norm();
  }
  const int test_count = std::max(
      1, static_cast<int>(std::lround(options.test_fraction *
                                      options.samples_per_agent)));
  for (int i = 0; i < options.n_agents; ++i) {
    RngStream stream =
        MakeStream(options.seed, i, 0, 0, StreamPurpose::kData);
    const Eigen::VectorXd mean =
        options.heterogeneity * StandardNormal(options.dim, stream);
    data.train.push_back(DrawShard(options.samples_per_agent, mean,
                                   data.ground_truth, options.separation,
                                   stream));
    data.test.push_back(DrawShard(test_count, mean, data.ground_truth,
                                  options.separation, stream));
  }
  return data;
}

Minibatch SampleMinibatch(int dataset_size, int batch_size,
                          RngStream& stream) {
  if (batch_size <= 0 || batch_size >= dataset_size) {
    throw Error(ErrorCode::kInvalidBatch,
                "batch size " + std::to_string(batch_size) +
                    " must lie in (0, " + std::to_string(dataset_size) + ")");
  }
  Minibatch batch;
  batch.indices.reserve(batch_size);
  for (int j = dataset_size - batch_size; j < dataset_size; ++j) {
    std::uniform_int_distribution<int> pick(0, j);
    const int t = pick(stream);
    if (std::find(batch.indices.begin(), batch.indices.end(), t) ==
        batch.indices.end()) {
      batch.indices.push_back(t);
    } else {
      batch.indices.push_back(j);
    }
  }
  std::sort(batch.indices.begin(), batch.indices.end());
  return batch;
}

LocalShard LoadCsvShard(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfig, path + ":" + std::to_string(line_no) +
                                            ": bad number '" + cell + "'");
      }
    }
    if (row.size() < 2 || (!rows.empty() && row.size() != rows[0].size())) {
      throw Error(ErrorCode::kConfig, path + ":" + std::to_string(line_no) +
                                          ": inconsistent column count");
    }
    if (row[0] != 1.0 && row[0] != -1.0) {
      throw Error(ErrorCode::kConfig, path + ":" + std::to_string(line_no) +
                                          ": label must be -1 or 1");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kConfig, path + ": no data rows");
  LocalShard shard;
  const int dim = static_cast<int>(rows[0].size()) - 1;
  shard.features.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t h = 0; h < rows.size(); ++h) {
    shard.labels.push_back(static_cast<int>(rows[h][0]));
    for (int l = 0; l < dim; ++l) shard.features(h, l) = rows[h][l + 1];
  }
  ValidateShard(shard);
  return shard;
}

}  // namespace ltadmm
