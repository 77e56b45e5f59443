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

#include "ltadmm/dp.h"

#include <cmath>
#include <random>
#include <string>

#include "ltadmm/error.h"

namespace ltadmm {

namespace {

void CheckComposition(long rounds, int local_steps, double delta) {
  if (rounds < 1 || local_steps < 1) {
    throw Error(ErrorCode::kDomain, "rounds and local steps must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kDomain, "delta must lie in (0, 1)");
  }
}

// zeta^2 |B|^2 / (sigma^2 m^2) with the sigma factor left out.
double SquaredSamplingRatio(double zeta, int batch_size, int dataset_size) {
  const double r = zeta * batch_size / static_cast<double>(dataset_size);
  return r * r;
}

}  // namespace

void ValidateMechanism(const MechanismParams& p) {
  if (p.batch_size <= 0 || p.batch_size >= p.dataset_size) {
    throw Error(ErrorCode::kDomain,
                "mechanism needs 0 < batch_size < dataset_size");
  }
  if (!(p.clip_threshold > 0.0) || !std::isfinite(p.clip_threshold)) {
    throw Error(ErrorCode::kDomain, "clip threshold must be positive");
  }
  if (!(p.noise_std >= 0.0) || !std::isfinite(p.noise_std)) {
    throw Error(ErrorCode::kDomain, "noise std must be >= 0");
  }
}

double LogInverseDelta(double delta, LogBase base) {
  return base == LogBase::kNatural ? -std::log(delta) : -std::log10(delta);
}

Eigen::VectorXd Clip(const Eigen::VectorXd& g, double zeta) {
  if (!(zeta > 0.0)) {
    throw Error(ErrorCode::kDomain, "clip threshold must be positive");
  }
  if (!g.allFinite()) {
    throw Error(ErrorCode::kDomain, "cannot clip a non-finite gradient");
  }
  return (zeta / (zeta + g.norm())) * g;
}

Eigen::VectorXd Perturb(const Eigen::VectorXd& g, double sigma,
                        RngStream& stream) {
  if (sigma == 0.0) return g;
  if (!(sigma > 0.0)) throw Error(ErrorCode::kDomain, "noise std must be >= 0");
  std::normal_distribution<double> normal(0.0, sigma);
  Eigen::VectorXd out = g;
  for (Eigen::Index l = 0; l < out.size(); ++l) out(l) += normal(stream);
  return out;
}

double RdpPerStep(const MechanismParams& p, double alpha) {
  ValidateMechanism(p);
  if (p.noise_std == 0.0) {
    throw Error(ErrorCode::kInfinitePrivacyCost,
                "noise std 0 gives unbounded privacy loss");
  }
  if (!(alpha > 1.0)) throw Error(ErrorCode::kDomain, "RDP order must be > 1");
  return 2.0 * alpha *
         SquaredSamplingRatio(p.clip_threshold, p.batch_size,
                              p.dataset_size) /
         (p.noise_std * p.noise_std);
}

double EpsilonAtOrder(const MechanismParams& p, long rounds, int local_steps,
                      double delta, double alpha, LogBase base) {
  CheckComposition(rounds, local_steps, delta);
  const double steps = static_cast<double>(rounds) * local_steps;
  return steps * RdpPerStep(p, alpha) +
         LogInverseDelta(delta, base) / (alpha - 1.0);
}

PrivacyBudget ComposeBudget(const MechanismParams& p, long rounds,
                            int local_steps, double delta, LogBase base) {
  ValidateMechanism(p);
  CheckComposition(rounds, local_steps, delta);
  if (p.noise_std == 0.0) {
    throw Error(ErrorCode::kInfinitePrivacyCost,
                "noise std 0 gives an infinite privacy budget");
  }
  const double steps = static_cast<double>(rounds) * local_steps;
  const double sigma2 = p.noise_std * p.noise_std;
  const double ratio2 =
      SquaredSamplingRatio(p.clip_threshold, p.batch_size, p.dataset_size);
  const double log_inv_delta = LogInverseDelta(delta, base);

  PrivacyBudget budget;
  budget.delta = delta;
  // Numerator and denominator are formed separately so integer-valued
  // inputs give a correctly rounded first term.
  const double m = p.dataset_size;
  budget.linear_term =
      2.0 * steps * p.clip_threshold * p.clip_threshold * p.batch_size *
      p.batch_size / (sigma2 * m * m);
  budget.sqrt_term = 2.0 * p.clip_threshold * p.batch_size /
                     (p.noise_std * p.dataset_size) *
                     std::sqrt(2.0 * steps * log_inv_delta);
  budget.epsilon = budget.linear_term + budget.sqrt_term;
  budget.optimal_alpha =
      1.0 + std::sqrt(sigma2 * log_inv_delta / (2.0 * steps * ratio2));
  budget.rdp_at_optimal_alpha = budget.linear_term * budget.optimal_alpha;
  budget.validity_margin = budget.optimal_alpha * p.batch_size /
                           (sigma2 * p.dataset_size);
  budget.valid = budget.validity_margin <= kAlphaValidityFraction;
  return budget;
}

double CalibrateNoise(double target_epsilon, double delta, long rounds,
                      int local_steps, double zeta, int batch_size,
                      int dataset_size, LogBase base) {
  if (!(target_epsilon > 0.0)) {
    throw Error(ErrorCode::kDomain, "target epsilon must be positive");
  }
  CheckComposition(rounds, local_steps, delta);
  ValidateMechanism({zeta, 0.0, batch_size, dataset_size});
  const double steps = static_cast<double>(rounds) * local_steps;
  const double ratio2 = SquaredSamplingRatio(zeta, batch_size, dataset_size);
  // epsilon = A u^2 + B u with u = 1 / sigma.
  const double a = 2.0 * steps * ratio2;
  const double b = 2.0 * std::sqrt(ratio2) *
                   std::sqrt(2.0 * steps * LogInverseDelta(delta, base));
  // Positive root written to avoid cancellation when B^2 >> 4 A epsilon.
  const double u =
      2.0 * target_epsilon / (b + std::sqrt(b * b + 4.0 * a * target_epsilon));
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw Error(ErrorCode::kInternal, "no positive noise level for epsilon " +
                                          std::to_string(target_epsilon));
  }
  return 1.0 / u;
}

double RunningEpsilon(const MechanismParams& p, long k_so_far,
                      int local_steps, double delta, LogBase base) {
  if (k_so_far <= 0) return 0.0;
  return ComposeBudget(p, k_so_far, local_steps, delta, base).epsilon;
}

}  // namespace ltadmm
