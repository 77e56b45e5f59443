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

#ifndef LTADMM_EXPERIMENT_H_
#define LTADMM_EXPERIMENT_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ltadmm/admm.h"
#include "ltadmm/config.h"
#include "ltadmm/dp.h"
#include "ltadmm/graph.h"
#include "ltadmm/metrics.h"
#include "ltadmm/objective.h"

namespace ltadmm {

// Everything derived from a config before any round runs.
struct PreparedExperiment {
  Topology topology;
  SpectralInfo spectral;
  std::vector<LocalShard> train;
  std::vector<LocalShard> test;
  EstimatedConstants constants;
  StepsizeReport stepsize;
};

Topology BuildTopology(const NetworkConfig& network);

// Builds topology, data and diagnostics. Throws kConfig on bad settings.
PreparedExperiment Prepare(const ExperimentConfig& cfg);

// Raised when the beta bound fails and the run was not forced.
class StepsizeError : public Error {
 public:
  StepsizeError(const std::string& message, StepsizeReport report)
      : Error(ErrorCode::kConfig, message), report_(report) {}
  const StepsizeReport& report() const { return report_; }

 private:
  StepsizeReport report_;
};

struct ExperimentResult {
  std::vector<RoundMetrics> metrics;
  // sigma_g used for the stationarity functional (estimate or override).
  double sigma_g = 0.0;
  double zeta = 0.0;
  std::vector<PrivacyBudget> budgets;  // per agent; empty when unaccounted
  StepsizeReport stepsize;
};

ExperimentResult RunExperiment(const ExperimentConfig& cfg, bool force);

// Per-agent closed-form budget at the configured K, or empty when the
// configuration is not privacy-accounted.
std::vector<PrivacyBudget> AgentBudgets(const RunConfig& run,
                                        std::span<const LocalShard> train);

inline constexpr const char* kMetricsCsvHeader =
    "k,grad_norm,consensus_err,train_acc,test_acc,model_time,epsilon,regime";

void WriteMetricsCsv(std::ostream& out, std::span<const RoundMetrics> rows);
// Throws kConfig on a malformed file.
std::vector<RoundMetrics> ReadMetricsCsv(std::istream& in);

// Fixed-order key=value lines. Empty metrics yield only "rounds=0".
std::string EmitSummary(std::span<const RoundMetrics> metrics,
                        const ExperimentResult* context = nullptr);

}  // namespace ltadmm

#endif  // LTADMM_EXPERIMENT_H_
