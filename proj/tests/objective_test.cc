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

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ltadmm/error.h"

namespace ltadmm {
namespace {

using Eigen::VectorXd;

VectorXd RandomVector(int dim, double max_norm, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  VectorXd v(dim);
  for (int l = 0; l < dim; ++l) v(l) = normal(rng);
  return v * (max_norm * uniform(rng) / v.norm());
}

// Central differences with step h.
VectorXd FiniteDifference(const std::function<double(const VectorXd&)>& f,
                          const VectorXd& x, double h = 1e-5) {
  VectorXd g(x.size());
  for (int l = 0; l < x.size(); ++l) {
    VectorXd up = x, down = x;
    up(l) += h;
    down(l) -= h;
    g(l) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

double RelativeError(const VectorXd& approx, const VectorXd& exact) {
  return (approx - exact).norm() / std::max(exact.norm(), 1e-3);
}

LocalShard SmallShard(int m, int dim, std::uint64_t seed) {
  SyntheticOptions options{1, m, dim, 1.0, seed};
  return GenerateSynthetic(options).train.front();
}

TEST(SampleLossTest, LogTwoAtOrigin) {
  const ObjectiveSpec spec{0.0, 3};
  const VectorXd a = VectorXd::Constant(3, 0.7);
  EXPECT_NEAR(SampleLoss(spec, VectorXd::Zero(3), a, 1), std::log(2.0),
              1e-15);
  EXPECT_NEAR(SampleLoss(spec, VectorXd::Zero(3), a, -1), std::log(2.0),
              1e-15);
}

TEST(SampleLossTest, PenaltyAtOnes) {
  const ObjectiveSpec spec{0.3, 4};
  const VectorXd x = VectorXd::Ones(4);
  const VectorXd a = VectorXd::Zero(4);
  EXPECT_NEAR(SampleLoss(spec, x, a, 1), std::log(2.0) + 4 * 0.3 * 0.5,
              1e-15);
}

TEST(SampleLossTest, StableForLargeMargins) {
  const ObjectiveSpec spec{0.0, 2};
  const VectorXd a = (VectorXd(2) << 2.0, 0.0).finished();
  const VectorXd x = (VectorXd(2) << 10.0, 0.0).finished();
  EXPECT_NEAR(SampleLoss(spec, x, a, 1), 2.061153620314381e-09, 1e-22);
  const VectorXd far = (VectorXd(2) << 500.0, 0.0).finished();
  EXPECT_NEAR(SampleLoss(spec, far, a, -1), 1000.0, 1e-9);
  EXPECT_TRUE(std::isfinite(SampleLoss(spec, far, a, 1)));
}

TEST(SampleLossTest, RejectsNonFinite) {
  const ObjectiveSpec spec{0.0, 2};
  VectorXd x = VectorXd::Zero(2);
  x(1) = std::nan("");
  try {
    SampleLoss(spec, x, VectorXd::Ones(2), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
  EXPECT_THROW(SampleGrad(spec, x, VectorXd::Ones(2), 1), Error);
}

TEST(SampleGradTest, LogisticSlopeAtOrigin) {
  const ObjectiveSpec spec{0.0, 2};
  const VectorXd a = (VectorXd(2) << 1.0, 0.0).finished();
  const VectorXd g = SampleGrad(spec, VectorXd::Zero(2), a, 1);
  EXPECT_NEAR(g(0), -0.5, 1e-15);
  EXPECT_EQ(g(1), 0.0);
}

TEST(SampleGradTest, PenaltyGradientVanishesAtOrigin) {
  const ObjectiveSpec spec{5.0, 3};
  const VectorXd a = VectorXd::Zero(3);
  const VectorXd g = SampleGrad(spec, VectorXd::Zero(3), a, 1);
  EXPECT_EQ(g.norm(), 0.0);
}

TEST(SampleGradTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  const ObjectiveSpec spec{0.1, 5};
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x = RandomVector(5, 10.0, rng);
    const VectorXd a = RandomVector(5, 3.0, rng);
    const int b = trial % 2 ? 1 : -1;
    const VectorXd fd = FiniteDifference(
        [&](const VectorXd& y) { return SampleLoss(spec, y, a, b); }, x);
    EXPECT_LT(RelativeError(fd, SampleGrad(spec, x, a, b)), 1e-5);
  }
}

TEST(PenaltyTest, AnalyticBounds) {
  const double w = 0.7;
  const ObjectiveSpec spec{w, 1};
  const VectorXd zero_a = VectorXd::Zero(1);
  double max_grad = 0.0;
  for (double t = -20.0; t <= 20.0; t += 1e-3) {
    const VectorXd x = VectorXd::Constant(1, t);
    const double penalty = SampleLoss(spec, x, zero_a, 1) - std::log(2.0);
    EXPECT_GE(penalty, -1e-15);
    EXPECT_LT(penalty, w);
    max_grad = std::max(max_grad, std::abs(SampleGrad(spec, x, zero_a, 1)(0)));
  }
  const double bound = w * 3.0 * std::sqrt(3.0) / 8.0;
  EXPECT_LE(max_grad, bound + 1e-15);
  EXPECT_NEAR(max_grad, bound, 1e-6);
}

TEST(MinibatchGradTest, WholeShardEqualsFullGradient) {
  const LocalShard shard = SmallShard(40, 4, 3);
  const ObjectiveSpec spec{0.05, 4};
  Minibatch all;
  for (int h = 0; h < shard.size(); ++h) all.indices.push_back(h);
  const VectorXd x = VectorXd::LinSpaced(4, -1.0, 2.0);
  EXPECT_LT((MinibatchGrad(spec, shard, all, x) -
             LocalFullGrad(spec, shard, x)).norm(),
            1e-14);
}

TEST(MinibatchGradTest, SinglePoint) {
  const LocalShard shard = SmallShard(10, 3, 4);
  const ObjectiveSpec spec{0.05, 3};
  const VectorXd x = VectorXd::Constant(3, 0.4);
  const Minibatch one{{7}};
  EXPECT_LT((MinibatchGrad(spec, shard, one, x) -
             SampleGrad(spec, x, shard.features.row(7).transpose(),
                        shard.labels[7])).norm(),
            1e-15);
}

TEST(MinibatchGradTest, EmptyBatchRejected) {
  const LocalShard shard = SmallShard(4, 2, 1);
  try {
    MinibatchGrad({0.0, 2}, shard, Minibatch{}, VectorXd::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidBatch);
  }
}

// Exhaustive enumeration of every size-k subset: the average minibatch
// gradient equals the local gradient exactly (up to rounding).
TEST(MinibatchGradTest, UnbiasedByEnumeration) {
  const ObjectiveSpec spec{0.02, 3};
  for (int m = 2; m <= 6; ++m) {
    const LocalShard shard = SmallShard(m, 3, 100 + m);
    const VectorXd x = VectorXd::LinSpaced(3, -0.5, 1.5);
    const VectorXd full = LocalFullGrad(spec, shard, x);
    for (int k = 1; k < m; ++k) {
      VectorXd total = VectorXd::Zero(3);
      int count = 0;
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) != k) continue;
        Minibatch batch;
        for (int h = 0; h < m; ++h) {
          if (mask & (1u << h)) batch.indices.push_back(h);
        }
        total += MinibatchGrad(spec, shard, batch, x);
        ++count;
      }
      EXPECT_LT((total / count - full).norm(), 1e-12)
          << "m=" << m << " k=" << k;
    }
  }
}

TEST(GlobalGradTest, IdenticalShards) {
  const LocalShard shard = SmallShard(30, 3, 9);
  const std::vector<LocalShard> shards(4, shard);
  const ObjectiveSpec spec{0.01, 3};
  const VectorXd x = VectorXd::Constant(3, -0.3);
  EXPECT_LT((GlobalGrad(spec, shards, x) - LocalFullGrad(spec, shard, x))
                .norm(),
            1e-15);
}

TEST(GlobalGradTest, OpposingGradientsCancel) {
  // Mirrored labels give f_2 gradient = -f_1 gradient at x = 0 (no penalty).
  LocalShard first = SmallShard(20, 3, 2);
  LocalShard second = first;
  for (int& b : second.labels) b = -b;
  const std::vector<LocalShard> shards = {first, second};
  const ObjectiveSpec spec{0.0, 3};
  const VectorXd x = VectorXd::Zero(3);
  const VectorXd g1 = LocalFullGrad(spec, first, x);
  EXPECT_GT(g1.norm(), 1e-3);
  EXPECT_LT((LocalFullGrad(spec, second, x) + g1).norm(), 1e-15);
  EXPECT_LT(GlobalGrad(spec, shards, x).norm(), 1e-15);
}

TEST(GlobalGradTest, MatchesFiniteDifferencesOfGlobalLoss) {
  SyntheticOptions options{3, 50, 4, 2.0, 8};
  options.heterogeneity = 0.5;
  const auto data = GenerateSynthetic(options);
  const ObjectiveSpec spec{0.1, 4};
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x = RandomVector(4, 10.0, rng);
    const VectorXd fd = FiniteDifference(
        [&](const VectorXd& y) { return GlobalLoss(spec, data.train, y); },
        x);
    EXPECT_LT(RelativeError(fd, GlobalGrad(spec, data.train, x)), 1e-5);
  }
}

TEST(AccuracyTest, GroundTruthAndTieRule) {
  SyntheticOptions options;
  options.n_agents = 3;
  options.samples_per_agent = 101;
  const auto data = GenerateSynthetic(options);
  EXPECT_DOUBLE_EQ(Accuracy(data.train, data.ground_truth), 1.0);
  EXPECT_DOUBLE_EQ(Accuracy(data.train, -data.ground_truth), 0.0);
  long positives = 0, total = 0;
  for (const auto& s : data.train) {
    for (int b : s.labels) positives += b == 1;
    total += s.size();
  }
  EXPECT_DOUBLE_EQ(Accuracy(data.train, VectorXd::Zero(5)),
                   static_cast<double>(positives) / total);
}

TEST(EstimateConstantsTest, SinglePointSmoothness) {
  LocalShard shard;
  shard.features = (Eigen::MatrixXd(1, 2) << 2.0, 0.0).finished();
  shard.labels = {1};
  const std::vector<LocalShard> shards = {shard};
  RngStream stream(1);
  const auto c = EstimateConstants({0.0, 2}, shards, 3, 1.0, 0, stream);
  EXPECT_DOUBLE_EQ(c.smoothness_L, 1.0);
  EXPECT_EQ(c.sgd_variance_sigma_g, 0.0);
}

TEST(EstimateConstantsTest, IdenticalShardsHaveNoVariation) {
  const LocalShard shard = SmallShard(50, 3, 5);
  const std::vector<LocalShard> shards(5, shard);
  RngStream stream(2);
  const auto c = EstimateConstants({0.01, 3}, shards, 4, 2.0, 5, stream);
  EXPECT_LT(c.grad_variation_sigma_f, 1e-15);
  EXPECT_GT(c.sgd_variance_sigma_g, 0.0);
}

TEST(EstimateConstantsTest, FullBatchHasNoSamplingNoise) {
  SyntheticOptions options{4, 60, 3, 1.0, 6};
  options.heterogeneity = 1.0;
  const auto data = GenerateSynthetic(options);
  RngStream stream(3);
  const auto c = EstimateConstants({0.01, 3}, data.train, 4, 1.0, 60, stream);
  EXPECT_EQ(c.sgd_variance_sigma_g, 0.0);
  EXPECT_GT(c.grad_variation_sigma_f, 0.0);
}

// |grad F(x) - grad F(y)| <= L |x - y| on random nearby pairs.
TEST(EstimateConstantsTest, SmoothnessBoundHolds) {
  SyntheticOptions options{3, 80, 5, 1.0, 12};
  options.heterogeneity = 0.5;
  const auto data = GenerateSynthetic(options);
  const ObjectiveSpec spec{0.2, 5};
  RngStream stream(4);
  const double L =
      EstimateConstants(spec, data.train, 1, 1.0, 0, stream).smoothness_L;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x = RandomVector(5, 5.0, rng);
    const VectorXd y = x + RandomVector(5, 1.0, rng);
    EXPECT_LE((GlobalGrad(spec, data.train, x) -
               GlobalGrad(spec, data.train, y)).norm(),
              L * (x - y).norm() + 1e-12);
  }
}

}  // namespace
}  // namespace ltadmm
