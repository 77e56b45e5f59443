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

#ifndef LTADMM_ADMM_H_
#define LTADMM_ADMM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ltadmm/data.h"
#include "ltadmm/dp.h"
#include "ltadmm/error.h"
#include "ltadmm/graph.h"
#include "ltadmm/metrics.h"
#include "ltadmm/objective.h"

namespace ltadmm {

// State owned by agent i. z[p] is the bridge variable z_{ij} for
// j = topology.neighbors(i)[p].
struct AgentState {
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> z;
  Eigen::VectorXd phi;
};

struct EdgeMessage {
  AgentId sender = 0;
  AgentId receiver = 0;
  // z_{sender,receiver} - 2 rho x_sender, with x already locally trained.
  Eigen::VectorXd payload;
};

struct RunConfig {
  double gamma = 0.1;
  double beta = 0.1;
  double rho = 0.1;
  int tau = 4;
  long rounds = 4000;
  // dataset_size is ignored here; each agent uses its own shard size.
  MechanismParams mechanism;
  bool clipping_enabled = true;
  bool noise_enabled = true;
  // Exact local gradients instead of minibatches.
  bool full_batch = false;
  std::uint64_t master_seed = 1;
  int workers = 1;
  // Accounting and cost reporting.
  double delta = 1e-4;
  LogBase log_base = LogBase::kNatural;
  CostModel cost;
};

// Throws kConfig on non-positive step sizes, tau, rho or workers, negative
// rounds, or invalid mechanism fields.
void ValidateRunConfig(const RunConfig& cfg);

// True when every step is a clipped, noised minibatch step so the
// accountant's bound applies.
bool PrivacyAccounted(const RunConfig& cfg);

// Magnitude beyond which an iterate is treated as diverged.
inline constexpr double kDivergenceThreshold = 1e12;

class DivergenceError : public Error {
 public:
  DivergenceError(long round, int step, AgentId agent)
      : Error(ErrorCode::kDivergence,
              "iterate diverged at round " + std::to_string(round) +
                  ", local step " + std::to_string(step) + ", agent " +
                  std::to_string(agent)),
        round_(round),
        step_(step),
        agent_(agent) {}

  long round() const { return round_; }
  int step() const { return step_; }
  AgentId agent() const { return agent_; }
  // Metrics of the rounds completed before the failure.
  const std::vector<RoundMetrics>& history() const { return history_; }
  void set_history(std::vector<RoundMetrics> history) {
    history_ = std::move(history);
  }

 private:
  long round_;
  int step_;
  AgentId agent_;
  std::vector<RoundMetrics> history_;
};

// x_i = x0[i], z_ij = rho x_i for every neighbor. This keeps
// sum_{ij} z_ij = rho sum_i d_i x_i from round 0 for any x0. An empty x0
// means all zeros of dimension `dim`.
std::vector<AgentState> InitState(const Topology& topology,
                                  std::span<const Eigen::VectorXd> x0,
                                  double rho, int dim = 0);

// rho d_i x_i - sum_j z_ij, evaluated once per round at x_{i,k}.
Eigen::VectorXd CorrectionTerm(const AgentState& agent, double rho);

struct LocalTrainResult {
  Eigen::VectorXd new_x;
  // The tau gradients actually applied, after clipping and noise.
  std::vector<Eigen::VectorXd> grad_log;
};

// Returns the applied gradient g(phi^t) for inner step t.
using GradientOracle =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& phi, int t)>;

// tau steps of phi <- phi - (gamma g(phi) + beta c) from phi = x, where the
// correction c is frozen at the start of the round. `round` and `agent` only
// label a DivergenceError.
LocalTrainResult LocalTrain(const AgentState& agent, double gamma,
                            double beta, double rho, int tau,
                            const GradientOracle& gradient, long round = 0,
                            AgentId id = 0);

// The private gradient estimator: minibatch (or full) gradient, soft clip,
// Gaussian noise, per the mode flags. Randomness comes from substreams keyed
// by (seed, agent, round, step).
Eigen::VectorXd PerturbedGradient(const ObjectiveSpec& spec,
                                  const LocalShard& shard,
                                  const RunConfig& cfg,
                                  const Eigen::VectorXd& phi, AgentId agent,
                                  long round, int step);

LocalTrainResult LocalTrain(const AgentState& agent, AgentId id,
                            const LocalShard& shard,
                            const ObjectiveSpec& spec, const RunConfig& cfg,
                            long round);

// One message per neighbor, in neighbor order.
std::vector<EdgeMessage> MakeMessages(const AgentState& agent, AgentId id,
                                      const Topology& topology, double rho);

// z_ij <- z_ij / 2 - payload_{j->i} / 2. Throws kProtocol unless exactly one
// message from each neighbor addressed to `id` is present.
void ApplyZUpdate(AgentState& agent, AgentId id, const Topology& topology,
                  std::span<const EdgeMessage> incoming);

Eigen::VectorXd MeanModel(std::span<const AgentState> states);
double ConsensusError(std::span<const AgentState> states);
// sum over directed edges of z_ij, and rho sum_i d_i x_i.
Eigen::VectorXd BridgeSum(std::span<const AgentState> states);
Eigen::VectorXd WeightedModelSum(std::span<const AgentState> states,
                                 const Topology& topology, double rho);

// |sum z - rho sum d_i x_i| relative to the summed magnitudes
// sum |z_ij| + rho sum d_i |x_i|, the floating-point scale of both sums.
double ConservationResidual(std::span<const AgentState> states,
                            const Topology& topology, double rho);

// Residual of x_bar' - x_bar = -(gamma/N) sum_{i,t} g_i^t relative to
// |x_bar| + |x_bar'| + (gamma/N) sum |g_i^t|.
double MeanDynamicsResidual(
    const Eigen::VectorXd& previous_mean, std::span<const AgentState> states,
    const std::vector<std::vector<Eigen::VectorXd>>& grad_logs,
    double gamma);

// Synchronous simulator. Each round: every agent trains locally (possibly
// on several worker threads), then all messages are exchanged, then all z
// are updated. Results never depend on the worker count.
class Simulator {
 public:
  Simulator(Topology topology, ObjectiveSpec spec,
            std::vector<LocalShard> train, std::vector<LocalShard> test,
            RunConfig cfg, std::vector<Eigen::VectorXd> x0 = {});

  // Executes the next round and returns its metrics.
  RoundMetrics Step();

  // Runs the remaining rounds. A DivergenceError carries the history.
  std::vector<RoundMetrics> Run(
      const std::function<void(const Simulator&, const RoundMetrics&)>&
          observer = {});

  RoundMetrics ComputeMetrics(long k) const;

  const std::vector<AgentState>& states() const { return states_; }
  std::vector<AgentState>& mutable_states() { return states_; }
  const std::vector<std::vector<Eigen::VectorXd>>& last_grad_logs() const {
    return grad_logs_;
  }
  long rounds_done() const { return rounds_done_; }
  const Topology& topology() const { return topology_; }
  const RunConfig& config() const { return cfg_; }
  const ObjectiveSpec& objective() const { return spec_; }
  std::span<const LocalShard> train() const { return train_; }
  std::span<const LocalShard> test() const { return test_; }

 private:
  void TrainAll();

  Topology topology_;
  ObjectiveSpec spec_;
  std::vector<LocalShard> train_;
  std::vector<LocalShard> test_;
  RunConfig cfg_;
  std::vector<AgentState> states_;
  std::vector<std::vector<Eigen::VectorXd>> grad_logs_;
  long rounds_done_ = 0;
};

// Running epsilon after `rounds` rounds: max over agents, +inf when the
// run is not privacy-accounted.
double NetworkEpsilon(const RunConfig& cfg,
                      std::span<const LocalShard> shards, long rounds);

std::vector<RoundMetrics> Run(const RunConfig& cfg, const Topology& topology,
                              const ObjectiveSpec& spec,
                              std::vector<LocalShard> train,
                              std::vector<LocalShard> test);

struct StepsizeReport {
  double beta_bound = 0.0;
  bool beta_ok = false;
  // c lambda_l / (L tau^2); only a heuristic scale, the exact constant is
  // not computable.
  double gamma_heuristic = 0.0;
  bool gamma_warn = false;
  double lambda_l = 0.0;
  double lambda_u = 0.0;
  double smoothness_L = 0.0;
};

inline constexpr double kGammaHeuristicC = 1.0;

StepsizeReport StepsizeCheck(const RunConfig& cfg,
                             const SpectralInfo& spectral, double smoothness_L,
                             double c = kGammaHeuristicC);

// key=value lines, beta_check=PASS|FAIL, gamma_check=OK|WARN.
std::string FormatStepsizeReport(const StepsizeReport& report,
                                 const RunConfig& cfg);

}  // namespace ltadmm

#endif  // LTADMM_ADMM_H_
