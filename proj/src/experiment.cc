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

#include "ltadmm/experiment.h"

#include <filesystem>
#include <sstream>

#include "ltadmm/format.h"
#include "ltadmm/rng.h"

namespace ltadmm {

namespace {

constexpr std::uint64_t kProbeStreamId = ~std::uint64_t{0};

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

void LoadCsvShards(const ExperimentConfig& cfg, PreparedExperiment& prep) {
  namespace fs = std::filesystem;
  fs::path dir(cfg.data.csv_dir);
  if (dir.is_relative()) dir = fs::path(cfg.base_dir) / dir;
  for (int i = 0; i < cfg.network.n_agents; ++i) {
    const std::string stem = "agent_" + std::to_string(i);
    prep.train.push_back(LoadCsvShard((dir / (stem + ".csv")).string()));
    const fs::path test = dir / (stem + "_test.csv");
    if (fs::exists(test)) prep.test.push_back(LoadCsvShard(test.string()));
  }
  if (!prep.test.empty() &&
      static_cast<int>(prep.test.size()) != cfg.network.n_agents) {
    prep.test.clear();
  }
}

}  // namespace

Topology BuildTopology(const NetworkConfig& network) {
  if (network.topology == "ring") return BuildRing(network.n_agents);
  if (network.topology == "complete") return BuildComplete(network.n_agents);
  if (network.topology == "edges") {
    return BuildFromEdgeList(network.n_agents, network.edges);
  }
  throw Error(ErrorCode::kConfig, "unknown topology " + network.topology);
}

PreparedExperiment Prepare(const ExperimentConfig& cfg) {
  Topology topology = [&] {
    try {
      return BuildTopology(cfg.network);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) throw;
      throw Error(ErrorCode::kConfig, std::string("network: ") + e.what());
    }
  }();
  PreparedExperiment prep{std::move(topology), {}, {}, {}, {}, {}};
  prep.spectral = ComputeSpectralInfo(prep.topology);

  if (cfg.data.csv_dir.empty()) {
    SyntheticOptions options = cfg.data.synthetic;
    options.n_agents = cfg.network.n_agents;
    SyntheticData data;
    try {
      data = GenerateSynthetic(options);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, std::string("data: ") + e.what());
    }
    prep.train = std::move(data.train);
    prep.test = std::move(data.test);
  } else {
    LoadCsvShards(cfg, prep);
  }

  RngStream probes =
      MakeStream(cfg.run.master_seed, kProbeStreamId, 0, 0,
                 StreamPurpose::kProbe);
  prep.constants = EstimateConstants(
      cfg.objective, prep.train, cfg.diagnostics.probe_count,
      cfg.diagnostics.probe_radius,
      cfg.run.full_batch ? 0 : cfg.run.mechanism.batch_size, probes);
  prep.stepsize = StepsizeCheck(cfg.run, prep.spectral,
                                prep.constants.smoothness_L,
                                cfg.diagnostics.gamma_heuristic_c);
  return prep;
}

std::vector<PrivacyBudget> AgentBudgets(const RunConfig& run,
                                        std::span<const LocalShard> train) {
  std::vector<PrivacyBudget> budgets;
  if (!PrivacyAccounted(run) || run.rounds < 1) return budgets;
  for (const auto& shard : train) {
    MechanismParams p = run.mechanism;
    p.dataset_size = shard.size();
    budgets.push_back(
        ComposeBudget(p, run.rounds, run.tau, run.delta, run.log_base));
  }
  return budgets;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg, bool force) {
  ValidateRunConfig(cfg.run);
  PreparedExperiment prep = Prepare(cfg);
  if (!prep.stepsize.beta_ok && !force) {
    throw StepsizeError("beta " + FormatDouble(cfg.run.beta) +
                            " violates the bound beta < " +
                            FormatDouble(prep.stepsize.beta_bound),
                        prep.stepsize);
  }
  ExperimentResult result;
  result.stepsize = prep.stepsize;
  result.zeta = cfg.run.mechanism.clip_threshold;
  result.sigma_g =
      cfg.diagnostics.sigma_g.value_or(prep.constants.sgd_variance_sigma_g);
  result.budgets = AgentBudgets(cfg.run, prep.train);
  Simulator sim(std::move(prep.topology), cfg.objective, std::move(prep.train),
                std::move(prep.test), cfg.run);
  result.metrics = sim.Run();
  return result;
}

void WriteMetricsCsv(std::ostream& out, std::span<const RoundMetrics> rows) {
  out << kMetricsCsvHeader << "\n";
  for (const auto& m : rows) {
    out << m.k << ',' << FormatDouble(m.grad_norm) << ','
        << FormatDouble(m.consensus_error) << ','
        << FormatDouble(m.train_accuracy) << ','
        << FormatDouble(m.test_accuracy) << ','
        << FormatDouble(m.model_time) << ','
        << FormatDouble(m.running_epsilon) << ',' << RegimeName(m.regime)
        << "\n";
  }
}

std::vector<RoundMetrics> ReadMetricsCsv(std::istream& in) {
  std::vector<RoundMetrics> rows;
  std::string line;
  if (!std::getline(in, line) || line != kMetricsCsvHeader) {
    throw Error(ErrorCode::kConfig, "metrics CSV: unexpected header");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() != 8) {
      throw Error(ErrorCode::kConfig, "metrics CSV:" + std::to_string(line_no) +
                                          ": expected 8 columns");
    }
    RoundMetrics m;
    try {
      m.k = std::stol(cells[0]);
      m.grad_norm = ParseDouble(cells[1]);
      m.consensus_error = ParseDouble(cells[2]);
      m.train_accuracy = ParseDouble(cells[3]);
      m.test_accuracy = ParseDouble(cells[4]);
      m.model_time = ParseDouble(cells[5]);
      m.running_epsilon = ParseDouble(cells[6]);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kConfig, "metrics CSV:" +
                                          std::to_string(line_no) + ": " +
                                          e.what());
    }
    if (cells[7] == "K1") {
      m.regime = Regime::kK1;
    } else if (cells[7] == "K2") {
      m.regime = Regime::kK2;
    } else {
      throw Error(ErrorCode::kConfig, "metrics CSV:" +
                                          std::to_string(line_no) +
                                          ": bad regime");
    }
    rows.push_back(m);
  }
  return rows;
}

std::string EmitSummary(std::span<const RoundMetrics> metrics,
                        const ExperimentResult* context) {
  std::ostringstream out;
  out << "rounds=" << metrics.size() << "\n";
  if (metrics.empty()) return out.str();
  const RoundMetrics& last = metrics.back();
  out << "final_grad_norm=" << FormatDouble(last.grad_norm) << "\n"
      << "final_consensus_err=" << FormatDouble(last.consensus_error) << "\n"
      << "final_train_acc=" << FormatDouble(last.train_accuracy) << "\n"
      << "final_test_acc=" << FormatDouble(last.test_accuracy) << "\n"
      << "model_time=" << FormatDouble(last.model_time) << "\n"
      << "epsilon=" << FormatDouble(last.running_epsilon) << "\n";
  if (context == nullptr) return out.str();
  out << "sigma_g=" << FormatDouble(context->sigma_g) << "\n"
      << "stationarity="
      << FormatDouble(
             ClippedStationarity(metrics, context->zeta, context->sigma_g))
      << "\n"
      << "stationarity_precondition="
      << (context->zeta > 8.0 * context->sigma_g ? "OK" : "WARN") << "\n";
  out << "epsilon_per_agent=";
  for (std::size_t i = 0; i < context->budgets.size(); ++i) {
    out << (i ? "," : "") << FormatDouble(context->budgets[i].epsilon);
  }
  out << "\n";
  if (!context->budgets.empty()) {
    bool valid = true;
    for (const auto& b : context->budgets) valid = valid && b.valid;
    out << "alpha=" << FormatDouble(context->budgets.front().optimal_alpha)
        << "\n"
        << "accountant_valid=" << (valid ? "true" : "false") << "\n";
  }
  out << "beta_check=" << (context->stepsize.beta_ok ? "PASS" : "FAIL")
      << "\n"
      << "gamma_check=" << (context->stepsize.gamma_warn ? "WARN" : "OK")
      << "\n";
  return out.str();
}

}  // namespace ltadmm
