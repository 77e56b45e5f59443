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

#include "ltadmm/objective.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ltadmm/error.h"

namespace ltadmm {

namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void CheckFinite(const VecRef& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::kDomain, std::string("non-finite ") + what);
  }
}

void CheckDims(const ObjectiveSpec& spec, const VecRef& x, int dim) {
  if (x.size() != dim || (spec.dim > 0 && spec.dim != dim)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model dimension " + std::to_string(x.size()) +
                    " does not match data dimension " + std::to_string(dim));
  }
}

double Penalty(const ObjectiveSpec& spec, const VecRef& x) {
  const Eigen::ArrayXd sq = x.array().square();
  return spec.reg_weight * (sq / (1.0 + sq)).sum();
}

Eigen::VectorXd PenaltyGrad(const ObjectiveSpec& spec, const VecRef& x) {
  const Eigen::ArrayXd denom = (1.0 + x.array().square()).square();
  return (spec.reg_weight * 2.0 * x.array() / denom).matrix();
}

}  // namespace

double SampleLoss(const ObjectiveSpec& spec, const VecRef& x, const VecRef& a,
                  int b) {
  CheckFinite(x, "model");
  CheckFinite(a, "feature");
  CheckDims(spec, x, static_cast<int>(a.size()));
  return Softplus(-b * a.dot(x)) + Penalty(spec, x);
}

Eigen::VectorXd SampleGrad(const ObjectiveSpec& spec, const VecRef& x,
                           const VecRef& a, int b) {
  CheckFinite(x, "model");
  CheckFinite(a, "feature");
  CheckDims(spec, x, static_cast<int>(a.size()));
  return -b * Sigmoid(-b * a.dot(x)) * a + PenaltyGrad(spec, x);
}

Eigen::VectorXd MinibatchGrad(const ObjectiveSpec& spec,
                              const LocalShard& shard, const Minibatch& batch,
                              const VecRef& x) {
  if (batch.indices.empty()) {
    throw Error(ErrorCode::kInvalidBatch, "empty minibatch");
  }
  CheckFinite(x, "model");
  CheckDims(spec, x, shard.dim());
  Eigen::VectorXd logistic = Eigen::VectorXd::Zero(x.size());
  for (int h : batch.indices) {
    if (h < 0 || h >= shard.size()) {
      throw Error(ErrorCode::kInvalidBatch, "minibatch index out of range");
    }
    const auto a = shard.features.row(h);
    const int b = shard.labels[h];
    logistic.noalias() += (-b * Sigmoid(-b * a.dot(x))) * a.transpose();
  }
  return logistic / static_cast<double>(batch.indices.size()) +
         PenaltyGrad(spec, x);
}

double LocalLoss(const ObjectiveSpec& spec, const LocalShard& shard,
                 const VecRef& x) {
  CheckFinite(x, "model");
  CheckDims(spec, x, shard.dim());
  const Eigen::VectorXd margins = shard.features * x;
  double total = 0.0;
  for (int h = 0; h < shard.size(); ++h) {
    total += Softplus(-shard.labels[h] * margins(h));
  }
  return total / shard.size() + Penalty(spec, x);
}

Eigen::VectorXd LocalFullGrad(const ObjectiveSpec& spec,
                              const LocalShard& shard, const VecRef& x) {
  CheckFinite(x, "model");
  CheckDims(spec, x, shard.dim());
  const Eigen::VectorXd margins = shard.features * x;
  Eigen::VectorXd coef(shard.size());
  for (int h = 0; h < shard.size(); ++h) {
    const int b = shard.labels[h];
    coef(h) = -b * Sigmoid(-b * margins(h));
  }
  return shard.features.transpose() * coef / shard.size() +
         PenaltyGrad(spec, x);
}

double GlobalLoss(const ObjectiveSpec& spec,
                  std::span<const LocalShard> shards, const VecRef& x) {
  double total = 0.0;
  for (const auto& shard : shards) total += LocalLoss(spec, shard, x);
  return total / static_cast<double>(shards.size());
}

Eigen::VectorXd GlobalGrad(const ObjectiveSpec& spec,
                           std::span<const LocalShard> shards,
                           const VecRef& x) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(x.size());
  for (const auto& shard : shards) total += LocalFullGrad(spec, shard, x);
  return total / static_cast<double>(shards.size());
}

double Accuracy(std::span<const LocalShard> shards, const VecRef& x) {
  long correct = 0;
  long total = 0;
  for (const auto& shard : shards) {
    const Eigen::VectorXd margins = shard.features * x;
    for (int h = 0; h < shard.size(); ++h) {
      const int predicted = margins(h) >= 0.0 ? 1 : -1;
      if (predicted == shard.labels[h]) ++correct;
    }
    total += shard.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / total;
}

EstimatedConstants EstimateConstants(const ObjectiveSpec& spec,
                                     std::span<const LocalShard> shards,
                                     int probe_count, double probe_radius,
                                     int batch_size, RngStream& stream) {
  if (probe_count < 1) {
    throw Error(ErrorCode::kDomain, "probe_count must be >= 1");
  }
  EstimatedConstants out;
  for (const auto& shard : shards) {
    const double curvature =
        shard.features.rowwise().squaredNorm().sum() / (4.0 * shard.size());
    out.smoothness_L =
        std::max(out.smoothness_L, curvature + 2.0 * spec.reg_weight);
  }
  if (shards.empty()) return out;

  const int dim = shards.front().dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int p = 0; p < probe_count; ++p) {
    Eigen::VectorXd x(dim);
    for (int l = 0; l < dim; ++l) x(l) = normal(stream);
    const double norm = x.norm();
    if (norm > 0.0) {
      x *= probe_radius * std::pow(uniform(stream), 1.0 / dim) / norm;
    }
    const Eigen::VectorXd global = GlobalGrad(spec, shards, x);
    for (const auto& shard : shards) {
      const Eigen::VectorXd local = LocalFullGrad(spec, shard, x);
      out.grad_variation_sigma_f =
          std::max(out.grad_variation_sigma_f, (global - local).norm());
      if (batch_size <= 0 || batch_size >= shard.size()) continue;
      std::vector<double> deviations;
      deviations.reserve(kSigmaGDraws);
      for (int d = 0; d < kSigmaGDraws; ++d) {
        const Minibatch batch =
            SampleMinibatch(shard.size(), batch_size, stream);
        deviations.push_back(
            (MinibatchGrad(spec, shard, batch, x) - local).norm());
      }
      std::sort(deviations.begin(), deviations.end());
      const auto rank = static_cast<std::size_t>(
          std::ceil(0.95 * kSigmaGDraws)) - 1;
      out.sgd_variance_sigma_g =
          std::max(out.sgd_variance_sigma_g, deviations[rank]);
    }
  }
  return out;
}

}  // namespace ltadmm
