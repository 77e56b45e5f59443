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

#ifndef LTADMM_METRICS_H_
#define LTADMM_METRICS_H_

#include <span>

namespace ltadmm {

// K1: |grad F(mean)| >= zeta, K2 otherwise.
enum class Regime { kK1, kK2 };

const char* RegimeName(Regime regime);

struct RoundMetrics {
  long k = 0;
  double grad_norm = 0.0;        // |grad F(x_bar)|
  double consensus_error = 0.0;  // max_i |x_i - x_bar|
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double model_time = 0.0;
  double running_epsilon = 0.0;
  Regime regime = Regime::kK2;
};

inline Regime ClassifyRegime(double grad_norm, double zeta) {
  return grad_norm >= zeta ? Regime::kK1 : Regime::kK2;
}

// Wall-clock cost of one gradient evaluation and one communication round.
struct CostModel {
  double t_g = 0.1;
  double t_c = 1.0;
};

enum class Algorithm { kLtAdmmDp, kPorter, kPrisma };

// Modelled time for a block of tau iterations:
//   LT-ADMM-DP  tau t_g + t_c
//   PORTER      tau (t_g + 2 t_c)
//   PriSMA      tau (2 t_g + t_c)
double CostPerBlock(const CostModel& model, Algorithm algorithm, int tau);

// Averaged stationarity functional controlled by the convergence bound:
//   (1/K) [ sum_{K1} (zeta/4 - 2 sigma_g) |g_k| + sum_{K2} |g_k|^2 / 4 ].
// Regimes are recomputed from grad_norm and zeta. Returns 0 for no rounds.
double ClippedStationarity(std::span<const RoundMetrics> metrics, double zeta,
                           double sigma_g);

}  // namespace ltadmm

#endif  // LTADMM_METRICS_H_
