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

#ifndef LTADMM_DP_H_
#define LTADMM_DP_H_

#include <Eigen/Dense>

#include "ltadmm/rng.h"

namespace ltadmm {

// Parameters of the per-step subsampled Gaussian mechanism applied to a
// softly clipped minibatch gradient.
struct MechanismParams {
  double clip_threshold = 1.0;  // zeta
  double noise_std = 0.5;       // sigma_e
  int batch_size = 8;
  int dataset_size = 1000;
};

// Throws kDomain unless 0 < batch_size < dataset_size, zeta > 0 and
// sigma_e >= 0.
void ValidateMechanism(const MechanismParams& params);

// Logarithm used for log(1/delta). Natural is the RDP convention; base 10
// is available for comparison with budgets quoted in that base.
enum class LogBase { kNatural, kBase10 };

double LogInverseDelta(double delta, LogBase base);

// Soft clipping g * zeta / (zeta + |g|). The output norm is strictly below
// zeta for every finite g.
Eigen::VectorXd Clip(const Eigen::VectorXd& g, double zeta);

// g + N(0, sigma^2 I). sigma = 0 returns g unchanged and draws nothing.
Eigen::VectorXd Perturb(const Eigen::VectorXd& g, double sigma,
                        RngStream& stream);

// RDP cost of one local step at order alpha: 2 alpha zeta^2 |B|^2 /
// (sigma^2 m^2). Throws kInfinitePrivacyCost when sigma = 0.
double RdpPerStep(const MechanismParams& params, double alpha);

// alpha* above this fraction of sigma^2 m / |B| breaks the small-order
// assumption behind the amplified per-step bound; the budget is flagged.
inline constexpr double kAlphaValidityFraction = 0.1;

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  double optimal_alpha = 0.0;
  double rdp_at_optimal_alpha = 0.0;
  // alpha* |B| / (sigma^2 m); the bound is trusted while this is <= 0.1.
  double validity_margin = 0.0;
  bool valid = true;
  // 2 K tau zeta^2 |B|^2 / (sigma^2 m^2), the first budget term.
  double linear_term = 0.0;
  double sqrt_term = 0.0;
};

// Composes K * tau steps and converts to (epsilon, delta)-DP at the
// closed-form optimal order
//   alpha* = 1 + sqrt(sigma^2 m^2 log(1/delta) / (2 K tau zeta^2 |B|^2)),
//   epsilon = 2 K tau zeta^2 |B|^2/(sigma^2 m^2)
//           + (2 zeta |B| / (sigma m)) sqrt(2 K tau log(1/delta)).
PrivacyBudget ComposeBudget(const MechanismParams& params, long rounds,
                            int local_steps, double delta,
                            LogBase base = LogBase::kNatural);

// The objective minimized over alpha: K tau rho_step(alpha) +
// log(1/delta)/(alpha - 1).
double EpsilonAtOrder(const MechanismParams& params, long rounds,
                      int local_steps, double delta, double alpha,
                      LogBase base = LogBase::kNatural);

// The sigma_e at which ComposeBudget returns target_epsilon. The budget is
// A/sigma^2 + B/sigma, so this is the positive root of a quadratic in 1/sigma.
double CalibrateNoise(double target_epsilon, double delta, long rounds,
                      int local_steps, double zeta, int batch_size,
                      int dataset_size, LogBase base = LogBase::kNatural);

// Budget after k_so_far rounds; 0 when k_so_far == 0.
double RunningEpsilon(const MechanismParams& params, long k_so_far,
                      int local_steps, double delta,
                      LogBase base = LogBase::kNatural);

}  // namespace ltadmm

#endif  // LTADMM_DP_H_
