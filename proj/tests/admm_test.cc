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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace ltadmm {
namespace {

using Eigen::VectorXd;

VectorXd Vec2(double a, double b) { return (VectorXd(2) << a, b).finished(); }

double RelativeGap(const VectorXd& a, const VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}

// Points (a, +1) and (a, -1) with a = e_1: the logistic gradient vanishes on
// every x orthogonal to e_1.
LocalShard BalancedShard() {
  LocalShard shard;
  shard.features = (Eigen::MatrixXd(2, 2) << 1.0, 0.0, 1.0, 0.0).finished();
  shard.labels = {1, -1};
  return shard;
}

RunConfig ReferenceConfig() {
  RunConfig cfg;
  cfg.rounds = 50;
  return cfg;
}

SyntheticData ReferenceData(int agents = 10, int samples = 200) {
  SyntheticOptions options;
  options.n_agents = agents;
  options.samples_per_agent = samples;
  options.heterogeneity = 0.5;
  options.separation = 2.0;
  return GenerateSynthetic(options);
}

TEST(InitStateTest, ZeroStart) {
  const Topology t = BuildRing(5);
  const auto states = InitState(t, {}, 0.1, 3);
  for (const auto& s : states) {
    EXPECT_EQ(s.x, VectorXd::Zero(3));
    ASSERT_EQ(s.z.size(), 2u);
    for (const auto& z : s.z) EXPECT_EQ(z, VectorXd::Zero(3));
  }
}

TEST(InitStateTest, ConsensusStart) {
  const Topology t = BuildComplete(4);
  const std::vector<VectorXd> x0(4, Vec2(1.5, -2.0));
  const auto states = InitState(t, x0, 0.3);
  for (const auto& s : states) {
    for (const auto& z : s.z) EXPECT_EQ(z, 0.3 * Vec2(1.5, -2.0));
  }
}

TEST(InitStateTest, HeterogeneousStartConserves) {
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {1, 3}, {3, 4}};
  const Topology t = BuildFromEdgeList(5, edges);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  std::vector<VectorXd> x0;
  for (int i = 0; i < 5; ++i) x0.push_back(Vec2(normal(rng), normal(rng)));
  const auto states = InitState(t, x0, 0.7);
  EXPECT_LT(RelativeGap(BridgeSum(states), WeightedModelSum(states, t, 0.7)),
            1e-12);
}

TEST(InitStateTest, DimensionMismatch) {
  const Topology t = BuildRing(3);
  const std::vector<VectorXd> x0 = {Vec2(0, 0), Vec2(0, 0),
                                    VectorXd::Zero(3)};
  try {
    InitState(t, x0, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(LocalTrainTest, ConsensusFixedPoint) {
  const Topology t = BuildRing(3);
  const std::vector<VectorXd> x0(3, Vec2(0.0, 3.0));
  const auto states = InitState(t, x0, 0.5);
  RunConfig cfg;
  cfg.rho = 0.5;
  cfg.full_batch = true;
  cfg.clipping_enabled = false;
  cfg.noise_enabled = false;
  const auto out =
      LocalTrain(states[0], 0, BalancedShard(), {0.0, 2}, cfg, 0);
  EXPECT_EQ(out.new_x, Vec2(0.0, 3.0));
  ASSERT_EQ(out.grad_log.size(), 4u);
}

TEST(LocalTrainTest, DegeneratesToGradientDescent) {
  const auto data = ReferenceData(3, 50);
  const ObjectiveSpec spec{0.01, 5};
  const Topology t = BuildRing(3);
  const std::vector<VectorXd> x0(3, VectorXd::LinSpaced(5, -1.0, 1.0));
  const auto states = InitState(t, x0, 0.1);
  const auto gradient = [&](const VectorXd& phi, int) {
    return LocalFullGrad(spec, data.train[1], phi);
  };
  const auto out = LocalTrain(states[1], 0.1, 0.0, 0.1, 1, gradient);
  const VectorXd expected =
      x0[1] - 0.1 * LocalFullGrad(spec, data.train[1], x0[1]);
  EXPECT_LT((out.new_x - expected).norm(), 1e-15);
}

// Two inner steps unrolled by hand:
//   c   = beta (rho d x - sum z) = 0.2 ((1,2) - (0.5,-1)) = (0.1, 0.6)
//   phi1 = x - gamma g0 - c     = (0.8, 1.5)
//   phi2 = phi1 - gamma g1 - c  = (0.65, 0.7)
TEST(LocalTrainTest, TwoScriptedSteps) {
  AgentState agent;
  agent.x = Vec2(1.0, 2.0);
  agent.z = {Vec2(0.5, 0.0), Vec2(0.0, -1.0)};
  const std::vector<VectorXd> scripted = {Vec2(1.0, -1.0), Vec2(0.5, 2.0)};
  std::vector<VectorXd> seen;
  const auto gradient = [&](const VectorXd& phi, int t) {
    seen.push_back(phi);
    return scripted[t];
  };
  const auto out = LocalTrain(agent, 0.1, 0.2, 0.5, 2, gradient);
  EXPECT_LT((out.new_x - Vec2(0.65, 0.7)).norm(), 1e-12);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_LT((seen[1] - Vec2(0.8, 1.5)).norm(), 1e-12);
  EXPECT_EQ(out.grad_log, scripted);
}

TEST(LocalTrainTest, DivergenceCarriesContext) {
  AgentState agent;
  agent.x = Vec2(0.0, 0.0);
  agent.z = {Vec2(0.0, 0.0)};
  const auto gradient = [](const VectorXd&, int t) {
    return Vec2(t == 2 ? 1e15 : 1.0, 0.0);
  };
  try {
    LocalTrain(agent, 1.0, 0.1, 0.1, 4, gradient, 17, 3);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.round(), 17);
    EXPECT_EQ(e.step(), 2);
    EXPECT_EQ(e.agent(), 3);
    EXPECT_EQ(e.code(), ErrorCode::kDivergence);
  }
}

TEST(MessagesTest, FixedPointPreserved) {
  const Topology t = BuildRing(3);
  const double rho = 0.5;
  const std::vector<VectorXd> x0(3, Vec2(2.0, -4.0));
  auto states = InitState(t, x0, rho);
  std::vector<std::vector<EdgeMessage>> inbox(3);
  for (int i = 0; i < 3; ++i) {
    for (auto& m : MakeMessages(states[i], i, t, rho)) {
      inbox[m.receiver].push_back(m);
    }
  }
  for (int i = 0; i < 3; ++i) ApplyZUpdate(states[i], i, t, inbox[i]);
  for (const auto& s : states) {
    for (const auto& z : s.z) EXPECT_EQ(z, rho * Vec2(2.0, -4.0));
  }
}

TEST(MessagesTest, OneStepArithmetic) {
  const std::vector<Edge> edges = {{0, 1}};
  const Topology t = BuildFromEdgeList(2, edges);
  auto states = InitState(t, {}, 0.25, 2);
  states[1].x = Vec2(4.0, -8.0);  // x_{1,k+1}
  const auto from_one = MakeMessages(states[1], 1, t, 0.25);
  ASSERT_EQ(from_one.size(), 1u);
  EXPECT_EQ(from_one[0].receiver, 0);
  ApplyZUpdate(states[0], 0, t, from_one);
  EXPECT_EQ(states[0].z[0], 0.25 * Vec2(4.0, -8.0));
}

TEST(MessagesTest, TriangleConservation) {
  const Topology t = BuildRing(3);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const double rho = 0.1 + std::abs(normal(rng));
    std::vector<AgentState> states(3);
    for (auto& s : states) {
      s.x = Vec2(normal(rng), normal(rng));
      s.z = {Vec2(normal(rng), normal(rng)), Vec2(normal(rng), normal(rng))};
    }
    std::vector<std::vector<EdgeMessage>> inbox(3);
    for (int i = 0; i < 3; ++i) {
      for (auto& m : MakeMessages(states[i], i, t, rho)) {
        inbox[m.receiver].push_back(m);
      }
    }
    for (int i = 0; i < 3; ++i) ApplyZUpdate(states[i], i, t, inbox[i]);
    EXPECT_LT(
        RelativeGap(BridgeSum(states), WeightedModelSum(states, t, rho)),
        1e-12);
  }
}

TEST(MessagesTest, ProtocolErrors) {
  const Topology t = BuildRing(4);
  auto states = InitState(t, {}, 0.1, 2);
  const auto from_1 = MakeMessages(states[1], 1, t, 0.1);
  const auto from_3 = MakeMessages(states[3], 3, t, 0.1);
  const auto from_2 = MakeMessages(states[2], 2, t, 0.1);
  auto code = [&](std::vector<EdgeMessage> inbox) {
    try {
      ApplyZUpdate(states[0], 0, t, inbox);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code({from_1[0]}), ErrorCode::kProtocol);                // missing
  EXPECT_EQ(code({from_1[0], from_1[0], from_3[0]}), ErrorCode::kProtocol);
  // Agent 2 is not adjacent to 0; its messages go to 1 and 3.
  EXPECT_EQ(code({from_1[0], from_3[0], from_2[0]}), ErrorCode::kProtocol);
  EXPECT_EQ(code({from_1[0], from_3[0]}), ErrorCode::kInternal);     // ok
}

TEST(SimulatorTest, StationaryConsensusIsExactlyInvariant) {
  const Topology t = BuildRing(4);
  RunConfig cfg;
  cfg.rho = 0.5;
  cfg.rounds = 5;
  cfg.full_batch = true;
  cfg.clipping_enabled = false;
  cfg.noise_enabled = false;
  const std::vector<VectorXd> x0(4, Vec2(0.0, 3.0));
  Simulator sim(t, {0.0, 2}, std::vector<LocalShard>(4, BalancedShard()), {},
                cfg, x0);
  const auto before = sim.states();
  const auto metrics = sim.Run();
  ASSERT_EQ(metrics.size(), 5u);
  for (const auto& m : metrics) {
    EXPECT_EQ(m.grad_norm, 0.0);
    EXPECT_EQ(m.consensus_error, 0.0);
  }
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(sim.states()[i].x, before[i].x);
    EXPECT_EQ(sim.states()[i].z, before[i].z);
  }
}

TEST(SimulatorTest, ZeroRounds) {
  const auto data = ReferenceData(3, 20);
  RunConfig cfg;
  cfg.rounds = 0;
  EXPECT_TRUE(
      ltadmm::Run(cfg, BuildRing(3), {0.01, 5}, data.train, data.test).empty());
}

TEST(SimulatorTest, RoundEqualsSequentialComposition) {
  const auto data = ReferenceData(5, 40);
  const Topology t = BuildRing(5);
  const ObjectiveSpec spec{0.01, 5};
  RunConfig cfg = ReferenceConfig();
  cfg.workers = 3;
  Simulator sim(t, spec, data.train, data.test, cfg);
  sim.Step();
  auto states = sim.states();
  sim.Step();

  cfg.workers = 1;
  for (int i = 0; i < 5; ++i) {
    states[i].x = LocalTrain(states[i], i, data.train[i], spec, cfg, 1).new_x;
  }
  std::vector<std::vector<EdgeMessage>> inbox(5);
  for (int i = 0; i < 5; ++i) {
    for (auto& m : MakeMessages(states[i], i, t, cfg.rho)) {
      inbox[m.receiver].push_back(m);
    }
  }
  for (int i = 0; i < 5; ++i) ApplyZUpdate(states[i], i, t, inbox[i]);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(states[i].x, sim.states()[i].x);
    EXPECT_EQ(states[i].z, sim.states()[i].z);
  }
}

TEST(SimulatorTest, InvariantsEveryRoundAllModes) {
  const auto data = ReferenceData(6, 60);
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4},
                                   {4, 5}, {5, 0}, {0, 3}};
  const Topology t = BuildFromEdgeList(6, edges);
  for (int mode = 0; mode < 8; ++mode) {
    RunConfig cfg = ReferenceConfig();
    cfg.rounds = 30;
    cfg.clipping_enabled = mode & 1;
    cfg.noise_enabled = mode & 2;
    cfg.full_batch = mode & 4;
    Simulator sim(t, {0.01, 5}, data.train, data.test, cfg);
    VectorXd mean = MeanModel(sim.states());
    for (long k = 0; k < cfg.rounds; ++k) {
      sim.Step();
      EXPECT_LT(ConservationResidual(sim.states(), t, cfg.rho), 1e-9)
          << "mode " << mode << " round " << k;
      EXPECT_LT(MeanDynamicsResidual(mean, sim.states(), sim.last_grad_logs(),
                                     cfg.gamma),
                1e-9)
          << "mode " << mode << " round " << k;
      const VectorXd next = MeanModel(sim.states());
      mean = next;
    }
  }
}

TEST(SimulatorTest, WorkerCountDoesNotChangeResults) {
  const auto data = ReferenceData(10, 100);
  RunConfig cfg = ReferenceConfig();
  std::vector<std::vector<RoundMetrics>> runs;
  for (int workers : {1, 2, 4}) {
    cfg.workers = workers;
    runs.push_back(ltadmm::Run(cfg, BuildRing(10), {0.01, 5}, data.train, data.test));
  }
  for (std::size_t r = 1; r < runs.size(); ++r) {
    ASSERT_EQ(runs[r].size(), runs[0].size());
    for (std::size_t k = 0; k < runs[0].size(); ++k) {
      EXPECT_EQ(runs[r][k].grad_norm, runs[0][k].grad_norm);
      EXPECT_EQ(runs[r][k].consensus_error, runs[0][k].consensus_error);
    }
  }
}

TEST(SimulatorTest, SeedChangesNoise) {
  const auto data = ReferenceData(4, 50);
  RunConfig cfg = ReferenceConfig();
  cfg.rounds = 3;
  const auto a = ltadmm::Run(cfg, BuildRing(4), {0.01, 5}, data.train, data.test);
  cfg.master_seed = 2;
  const auto b = ltadmm::Run(cfg, BuildRing(4), {0.01, 5}, data.train, data.test);
  EXPECT_NE(a.back().grad_norm, b.back().grad_norm);
}

TEST(SimulatorTest, MetricsBookkeeping) {
  const auto data = ReferenceData(10, 100);
  RunConfig cfg = ReferenceConfig();
  cfg.rounds = 20;
  const auto metrics =
      ltadmm::Run(cfg, BuildRing(10), {0.01, 5}, data.train, data.test);
  ASSERT_EQ(metrics.size(), 20u);
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    EXPECT_EQ(metrics[k].k, static_cast<long>(k));
    EXPECT_DOUBLE_EQ(metrics[k].model_time, (k + 1) * 1.4);
    MechanismParams p = cfg.mechanism;
    p.dataset_size = 100;
    EXPECT_EQ(metrics[k].running_epsilon,
              ComposeBudget(p, k + 1, 4, 1e-4).epsilon);
    EXPECT_EQ(metrics[k].regime == Regime::kK1,
              metrics[k].grad_norm >= cfg.mechanism.clip_threshold);
  }
}

TEST(SimulatorTest, UnaccountedModesReportInfiniteEpsilon) {
  const auto data = ReferenceData(3, 30);
  RunConfig cfg = ReferenceConfig();
  cfg.rounds = 1;
  cfg.noise_enabled = false;
  const auto m = ltadmm::Run(cfg, BuildRing(3), {0.01, 5}, data.train, data.test);
  EXPECT_TRUE(std::isinf(m[0].running_epsilon));
}

TEST(SimulatorTest, DivergenceKeepsHistory) {
  const auto data = ReferenceData(10, 100);
  RunConfig cfg = ReferenceConfig();
  cfg.rounds = 1000;
  cfg.beta = 10.0;  // far above 2 / (tau lambda_u rho) = 1.25
  cfg.noise_enabled = false;
  Simulator sim(BuildRing(10), {0.01, 5}, data.train, data.test, cfg);
  try {
    sim.Run();
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.round(), 0);
    EXPECT_EQ(static_cast<long>(e.history().size()), e.round());
  }
}

TEST(SimulatorTest, RejectsBatchNotSmallerThanShard) {
  const auto data = ReferenceData(3, 8);
  RunConfig cfg = ReferenceConfig();
  try {
    Simulator sim(BuildRing(3), {0.01, 5}, data.train, data.test, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidBatch);
  }
}

TEST(StepsizeCheckTest, ReferenceParameters) {
  const SpectralInfo spectral = ComputeSpectralInfo(BuildRing(10));
  RunConfig cfg;
  const StepsizeReport r = StepsizeCheck(cfg, spectral, 1.3);
  EXPECT_TRUE(r.beta_ok);
  EXPECT_NEAR(r.beta_bound, 1.25, 1e-9);
  EXPECT_NEAR(r.gamma_heuristic, spectral.lambda_min_nonzero / (1.3 * 16),
              1e-15);
}

TEST(StepsizeCheckTest, BoundaryAndHeuristic) {
  const SpectralInfo spectral = ComputeSpectralInfo(BuildRing(10));
  RunConfig cfg;
  cfg.beta = BetaBound(spectral, cfg.tau, cfg.rho);
  EXPECT_FALSE(StepsizeCheck(cfg, spectral, 1.0).beta_ok);
  const double L = 2.0;
  cfg.gamma = spectral.lambda_min_nonzero / (L * cfg.tau * cfg.tau);
  EXPECT_FALSE(StepsizeCheck(cfg, spectral, L).gamma_warn);
  cfg.gamma *= 10.0;
  EXPECT_TRUE(StepsizeCheck(cfg, spectral, L).gamma_warn);
  const std::string text = FormatStepsizeReport(StepsizeCheck(cfg, spectral, L), cfg);
  EXPECT_NE(text.find("beta_check=FAIL"), std::string::npos);
  EXPECT_NE(text.find("gamma_check=WARN"), std::string::npos);
}

}  // namespace
}  // namespace ltadmm
