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

#include "ltadmm/admm.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "ltadmm/format.h"
#include "ltadmm/rng.h"

namespace ltadmm {

namespace {

bool Diverged(const Eigen::VectorXd& v) {
  return !v.allFinite() || v.cwiseAbs().maxCoeff() > kDivergenceThreshold;
}

void RequireConfig(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kConfig, message);
}

}  // namespace

void ValidateRunConfig(const RunConfig& cfg) {
  RequireConfig(cfg.gamma > 0.0, "gamma must be positive");
  RequireConfig(cfg.beta > 0.0, "beta must be positive");
  RequireConfig(cfg.rho > 0.0, "rho must be positive");
  RequireConfig(cfg.tau >= 1, "tau must be >= 1");
  RequireConfig(cfg.rounds >= 0, "rounds must be >= 0");
  RequireConfig(cfg.workers >= 1, "workers must be >= 1");
  RequireConfig(cfg.mechanism.clip_threshold > 0.0, "zeta must be positive");
  RequireConfig(cfg.mechanism.noise_std >= 0.0, "sigma_e must be >= 0");
  RequireConfig(cfg.full_batch || cfg.mechanism.batch_size >= 1,
                "batch_size must be >= 1");
  RequireConfig(cfg.delta > 0.0 && cfg.delta < 1.0, "delta must be in (0,1)");
  RequireConfig(cfg.cost.t_g > 0.0 && cfg.cost.t_c > 0.0,
                "cost model entries must be positive");
}

bool PrivacyAccounted(const RunConfig& cfg) {
  return cfg.clipping_enabled && cfg.noise_enabled && !cfg.full_batch &&
         cfg.mechanism.noise_std > 0.0;
}

std::vector<AgentState> InitState(const Topology& topology,
                                  std::span<const Eigen::VectorXd> x0,
                                  double rho, int dim) {
  const int n = topology.n_agents();
  if (!x0.empty() && static_cast<int>(x0.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "need one initial model per agent");
  }
  if (!x0.empty()) dim = static_cast<int>(x0.front().size());
  std::vector<AgentState> states(n);
  for (int i = 0; i < n; ++i) {
    AgentState& s = states[i];
    s.x = x0.empty() ? Eigen::VectorXd::Zero(dim) : x0[i];
    if (s.x.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "initial model of agent " + std::to_string(i) +
                      " has the wrong dimension");
    }
    s.z.assign(topology.degree(i), rho * s.x);
    s.phi = s.x;
  }
  return states;
}

Eigen::VectorXd CorrectionTerm(const AgentState& agent, double rho) {
  Eigen::VectorXd c = rho * static_cast<double>(agent.z.size()) * agent.x;
  for (const auto& z : agent.z) c -= z;
  return c;
}

LocalTrainResult LocalTrain(const AgentState& agent, double gamma,
                            double beta, double rho, int tau,
                            const GradientOracle& gradient, long round,
                            AgentId id) {
  const Eigen::VectorXd correction = beta * CorrectionTerm(agent, rho);
  LocalTrainResult out;
  out.grad_log.reserve(tau);
  Eigen::VectorXd phi = agent.x;
  for (int t = 0; t < tau; ++t) {
    Eigen::VectorXd g = gradient(phi, t);
    phi -= gamma * g + correction;
    out.grad_log.push_back(std::move(g));
    if (Diverged(phi)) throw DivergenceError(round, t, id);
  }
  out.new_x = std::move(phi);
  return out;
}

Eigen::VectorXd PerturbedGradient(const ObjectiveSpec& spec,
                                  const LocalShard& shard,
                                  const RunConfig& cfg,
                                  const Eigen::VectorXd& phi, AgentId agent,
                                  long round, int step) {
  Eigen::VectorXd g;
  if (cfg.full_batch) {
    g = LocalFullGrad(spec, shard, phi);
  } else {
    RngStream batch_stream = MakeStream(cfg.master_seed, agent, round, step,
                                        StreamPurpose::kMinibatch);
    const Minibatch batch = SampleMinibatch(
        shard.size(), cfg.mechanism.batch_size, batch_stream);
    g = MinibatchGrad(spec, shard, batch, phi);
  }
  if (cfg.clipping_enabled) g = Clip(g, cfg.mechanism.clip_threshold);
  if (cfg.noise_enabled && cfg.mechanism.noise_std > 0.0) {
    RngStream noise_stream = MakeStream(cfg.master_seed, agent, round, step,
                                        StreamPurpose::kNoise);
    g = Perturb(g, cfg.mechanism.noise_std, noise_stream);
  }
  return g;
}

LocalTrainResult LocalTrain(const AgentState& agent, AgentId id,
                            const LocalShard& shard,
                            const ObjectiveSpec& spec, const RunConfig& cfg,
                            long round) {
  return LocalTrain(
      agent, cfg.gamma, cfg.beta, cfg.rho, cfg.tau,
      [&](const Eigen::VectorXd& phi, int t) {
        return PerturbedGradient(spec, shard, cfg, phi, id, round, t);
      },
      round, id);
}

std::vector<EdgeMessage> MakeMessages(const AgentState& agent, AgentId id,
                                      const Topology& topology, double rho) {
  const auto& neighbors = topology.neighbors(id);
  if (agent.z.size() != neighbors.size()) {
    throw Error(ErrorCode::kProtocol, "agent " + std::to_string(id) +
                                          " holds the wrong number of z");
  }
  std::vector<EdgeMessage> out;
  out.reserve(neighbors.size());
  for (std::size_t p = 0; p < neighbors.size(); ++p) {
    out.push_back({id, neighbors[p], agent.z[p] - 2.0 * rho * agent.x});
  }
  return out;
}

void ApplyZUpdate(AgentState& agent, AgentId id, const Topology& topology,
                  std::span<const EdgeMessage> incoming) {
  const auto& neighbors = topology.neighbors(id);
  std::vector<const EdgeMessage*> by_slot(neighbors.size(), nullptr);
  for (const auto& msg : incoming) {
    if (msg.receiver != id) {
      throw Error(ErrorCode::kProtocol,
                  "message for agent " + std::to_string(msg.receiver) +
                      " delivered to agent " + std::to_string(id));
    }
    const int slot = topology.NeighborIndex(id, msg.sender);
    if (slot < 0) {
      throw Error(ErrorCode::kProtocol,
                  "agent " + std::to_string(msg.sender) +
                      " is not a neighbor of agent " + std::to_string(id));
    }
    if (by_slot[slot] != nullptr) {
      throw Error(ErrorCode::kProtocol,
                  "duplicate message from agent " +
                      std::to_string(msg.sender) + " to agent " +
                      std::to_string(id));
    }
    by_slot[slot] = &msg;
  }
  for (std::size_t p = 0; p < neighbors.size(); ++p) {
    if (by_slot[p] == nullptr) {
      throw Error(ErrorCode::kProtocol,
                  "missing message from agent " +
                      std::to_string(neighbors[p]) + " to agent " +
                      std::to_string(id));
    }
  }
  for (std::size_t p = 0; p < neighbors.size(); ++p) {
    agent.z[p] = 0.5 * agent.z[p] - 0.5 * by_slot[p]->payload;
  }
}

Eigen::VectorXd MeanModel(std::span<const AgentState> states) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(states.front().x.size());
  for (const auto& s : states) mean += s.x;
  return mean / static_cast<double>(states.size());
}

double ConsensusError(std::span<const AgentState> states) {
  const Eigen::VectorXd mean = MeanModel(states);
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, (s.x - mean).norm());
  return worst;
}

Eigen::VectorXd BridgeSum(std::span<const AgentState> states) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(states.front().x.size());
  for (const auto& s : states) {
    for (const auto& z : s.z) sum += z;
  }
  return sum;
}

Eigen::VectorXd WeightedModelSum(std::span<const AgentState> states,
                                 const Topology& topology, double rho) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(states.front().x.size());
  for (int i = 0; i < static_cast<int>(states.size()); ++i) {
    sum += (rho * topology.degree(i)) * states[i].x;
  }
  return sum;
}

double ConservationResidual(std::span<const AgentState> states,
                            const Topology& topology, double rho) {
  double scale = 0.0;
  for (int i = 0; i < static_cast<int>(states.size()); ++i) {
    scale += rho * topology.degree(i) * states[i].x.norm();
    for (const auto& z : states[i].z) scale += z.norm();
  }
  const double gap =
      (BridgeSum(states) - WeightedModelSum(states, topology, rho)).norm();
  return scale > 0.0 ? gap / scale : gap;
}

double MeanDynamicsResidual(
    const Eigen::VectorXd& previous_mean, std::span<const AgentState> states,
    const std::vector<std::vector<Eigen::VectorXd>>& grad_logs,
    double gamma) {
  const double n = static_cast<double>(states.size());
  Eigen::VectorXd applied = Eigen::VectorXd::Zero(previous_mean.size());
  double applied_scale = 0.0;
  for (const auto& log : grad_logs) {
    for (const auto& g : log) {
      applied += g;
      applied_scale += g.norm();
    }
  }
  const Eigen::VectorXd mean = MeanModel(states);
  const double gap =
      (mean - previous_mean + (gamma / n) * applied).norm();
  const double scale =
      mean.norm() + previous_mean.norm() + (gamma / n) * applied_scale;
  return scale > 0.0 ? gap / scale : gap;
}

double NetworkEpsilon(const RunConfig& cfg,
                      std::span<const LocalShard> shards, long rounds) {
  if (rounds <= 0) return 0.0;
  if (!PrivacyAccounted(cfg)) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& shard : shards) {
    MechanismParams p = cfg.mechanism;
    p.dataset_size = shard.size();
    worst = std::max(worst, RunningEpsilon(p, rounds, cfg.tau, cfg.delta,
                                           cfg.log_base));
  }
  return worst;
}

Simulator::Simulator(Topology topology, ObjectiveSpec spec,
                     std::vector<LocalShard> train,
                     std::vector<LocalShard> test, RunConfig cfg,
                     std::vector<Eigen::VectorXd> x0)
    : topology_(std::move(topology)),
      spec_(spec),
      train_(std::move(train)),
      test_(std::move(test)),
      cfg_(cfg) {
  ValidateRunConfig(cfg_);
  const int n = topology_.n_agents();
  if (static_cast<int>(train_.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "need one training shard per agent");
  }
  for (const auto& shard : train_) {
    ValidateShard(shard);
    if (shard.dim() != train_.front().dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "shards disagree on feature dimension");
    }
    if (!cfg_.full_batch && cfg_.mechanism.batch_size >= shard.size()) {
      throw Error(ErrorCode::kInvalidBatch,
                  "batch_size must be smaller than every shard");
    }
  }
  if (spec_.dim == 0) spec_.dim = train_.front().dim();
  states_ = InitState(topology_, x0, cfg_.rho, spec_.dim);
  if (states_.front().x.size() != spec_.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "initial model dimension does not match the data");
  }
}

void Simulator::TrainAll() {
  const int n = topology_.n_agents();
  const long k = rounds_done_;
  std::vector<LocalTrainResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](int first, int stride) {
    for (int i = first; i < n; i += stride) {
      try {
        results[i] = LocalTrain(states_[i], i, train_[i], spec_, cfg_, k);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min(cfg_.workers, n);
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }  // joins
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  grad_logs_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    states_[i].x = std::move(results[i].new_x);
    states_[i].phi = states_[i].x;
    grad_logs_[i] = std::move(results[i].grad_log);
  }
}

RoundMetrics Simulator::Step() {
  TrainAll();
  const int n = topology_.n_agents();
  // Barrier: every x_{k+1} is known before anything is sent.
  std::vector<std::vector<EdgeMessage>> inbox(n);
  for (int i = 0; i < n; ++i) {
    for (auto& msg : MakeMessages(states_[i], i, topology_, cfg_.rho)) {
      inbox[msg.receiver].push_back(std::move(msg));
    }
  }
  for (int i = 0; i < n; ++i) {
    ApplyZUpdate(states_[i], i, topology_, inbox[i]);
  }
  const RoundMetrics metrics = ComputeMetrics(rounds_done_);
  ++rounds_done_;
  return metrics;
}

RoundMetrics Simulator::ComputeMetrics(long k) const {
  RoundMetrics m;
  m.k = k;
  const Eigen::VectorXd mean = MeanModel(states_);
  m.grad_norm = GlobalGrad(spec_, train_, mean).norm();
  m.consensus_error = ConsensusError(states_);
  m.train_accuracy = Accuracy(train_, mean);
  m.test_accuracy = test_.empty() ? 0.0 : Accuracy(test_, mean);
  m.model_time =
      static_cast<double>(k + 1) *
      CostPerBlock(cfg_.cost, Algorithm::kLtAdmmDp, cfg_.tau);
  m.running_epsilon = NetworkEpsilon(cfg_, train_, k + 1);
  m.regime = ClassifyRegime(m.grad_norm, cfg_.mechanism.clip_threshold);
  return m;
}

std::vector<RoundMetrics> Simulator::Run(
    const std::function<void(const Simulator&, const RoundMetrics&)>&
        observer) {
  std::vector<RoundMetrics> history;
  history.reserve(static_cast<std::size_t>(
      std::max(0L, cfg_.rounds - rounds_done_)));
  while (rounds_done_ < cfg_.rounds) {
    try {
      history.push_back(Step());
    } catch (DivergenceError& e) {
      e.set_history(std::move(history));
      throw;
    }
    if (observer) observer(*this, history.back());
  }
  return history;
}

std::vector<RoundMetrics> Run(const RunConfig& cfg, const Topology& topology,
                              const ObjectiveSpec& spec,
                              std::vector<LocalShard> train,
                              std::vector<LocalShard> test) {
  Simulator sim(topology, spec, std::move(train), std::move(test), cfg);
  return sim.Run();
}

StepsizeReport StepsizeCheck(const RunConfig& cfg,
                             const SpectralInfo& spectral, double smoothness_L,
                             double c) {
  StepsizeReport r;
  r.lambda_l = spectral.lambda_min_nonzero;
  r.lambda_u = spectral.lambda_max;
  r.smoothness_L = smoothness_L;
  r.beta_bound = BetaBound(spectral, cfg.tau, cfg.rho);
  r.beta_ok = cfg.beta < r.beta_bound;
  r.gamma_heuristic = c * spectral.lambda_min_nonzero /
                      (smoothness_L * cfg.tau * cfg.tau);
  r.gamma_warn = cfg.gamma > r.gamma_heuristic;
  return r;
}

std::string FormatStepsizeReport(const StepsizeReport& r,
                                 const RunConfig& cfg) {
  std::ostringstream out;
  out << "lambda_l=" << FormatDouble(r.lambda_l) << "\n"
      << "lambda_u=" << FormatDouble(r.lambda_u) << "\n"
      << "smoothness_L=" << FormatDouble(r.smoothness_L) << "\n"
      << "beta=" << FormatDouble(cfg.beta) << "\n"
      << "beta_bound=" << FormatDouble(r.beta_bound) << "\n"
      << "beta_check=" << (r.beta_ok ? "PASS" : "FAIL") << "\n"
      << "gamma=" << FormatDouble(cfg.gamma) << "\n"
      << "gamma_heuristic=" << FormatDouble(r.gamma_heuristic) << "\n"
      << "gamma_check=" << (r.gamma_warn ? "WARN" : "OK") << "\n";
  return out.str();
}

}  // namespace ltadmm
