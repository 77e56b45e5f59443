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

#ifndef LTADMM_OBJECTIVE_H_
#define LTADMM_OBJECTIVE_H_

#include <span>

#include <Eigen/Dense>

#include "ltadmm/data.h"
#include "ltadmm/rng.h"

namespace ltadmm {

// Logistic loss with the smooth nonconvex penalty
//   f_h(x) = log(1 + exp(-b <a, x>)) + reg_weight * sum_l x_l^2 / (1 + x_l^2).
// The penalty is attached to every per-sample loss, so averages of sample
// gradients are unbiased for the local gradient.
struct ObjectiveSpec {
  double reg_weight = 0.01;
  int dim = 0;
};

using VecRef = Eigen::Ref<const Eigen::VectorXd>;

double SampleLoss(const ObjectiveSpec& spec, const VecRef& x, const VecRef& a,
                  int b);
Eigen::VectorXd SampleGrad(const ObjectiveSpec& spec, const VecRef& x,
                           const VecRef& a, int b);

// Mean of SampleGrad over the batch. Throws kInvalidBatch when empty.
Eigen::VectorXd MinibatchGrad(const ObjectiveSpec& spec,
                              const LocalShard& shard, const Minibatch& batch,
                              const VecRef& x);

double LocalLoss(const ObjectiveSpec& spec, const LocalShard& shard,
                 const VecRef& x);
Eigen::VectorXd LocalFullGrad(const ObjectiveSpec& spec,
                              const LocalShard& shard, const VecRef& x);

// F(x) = (1/N) sum_i f_i(x) and its gradient.
double GlobalLoss(const ObjectiveSpec& spec,
                  std::span<const LocalShard> shards, const VecRef& x);
Eigen::VectorXd GlobalGrad(const ObjectiveSpec& spec,
                           std::span<const LocalShard> shards,
                           const VecRef& x);

// Fraction of pooled points with sign(<a, x>) == b, where sign(0) = +1.
double Accuracy(std::span<const LocalShard> shards, const VecRef& x);

struct EstimatedConstants {
  double smoothness_L = 0.0;
  double grad_variation_sigma_f = 0.0;
  double sgd_variance_sigma_g = 0.0;
};

// Number of minibatch draws per (probe, agent) for the sigma_g estimate.
inline constexpr int kSigmaGDraws = 100;

// L uses the analytic bound max_i (1/(4 m_i)) sum_h |a_{i,h}|^2 + 2 reg_weight.
// sigma_f is the largest |grad F(x) - grad f_i(x)| over probes drawn
// uniformly from the ball of radius probe_radius. sigma_g is the largest
// 95th percentile of |minibatch grad - local grad| over kSigmaGDraws draws;
// batch_size <= 0 or >= m_i means full batch and contributes 0. These are
// estimates, not certificates.
EstimatedConstants EstimateConstants(const ObjectiveSpec& spec,
                                     std::span<const LocalShard> shards,
                                     int probe_count, double probe_radius,
                                     int batch_size, RngStream& stream);

}  // namespace ltadmm

#endif  // LTADMM_OBJECTIVE_H_
