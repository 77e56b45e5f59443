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

// Command-line front end: run experiments, query the privacy accountant and
// inspect network spectra.
//
// Exit codes: 0 success, 2 config error, 3 step-size abort, 4 divergence.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ltadmm/admm.h"
#include "ltadmm/config.h"
#include "ltadmm/dp.h"
#include "ltadmm/error.h"
#include "ltadmm/experiment.h"
#include "ltadmm/format.h"
#include "ltadmm/graph.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStepsize = 3;
constexpr int kExitDivergence = 4;

struct AccountantArgs {
  long rounds = 4000;
  int tau = 4;
  double zeta = 1.0;
  int batch = 8;
  int dataset = 1000;
  double sigma = 0.5;
  double delta = 1e-4;
  double epsilon = 0.0;
  std::string log_base = "e";
};

void AddAccountantOptions(CLI::App* cmd, AccountantArgs& a, bool calibrate) {
  cmd->add_option("--rounds,-K", a.rounds, "communication rounds K")
      ->capture_default_str();
  cmd->add_option("--tau", a.tau, "local steps per round")
      ->capture_default_str();
  cmd->add_option("--zeta", a.zeta, "clipping threshold")
      ->capture_default_str();
  cmd->add_option("--batch", a.batch, "minibatch size |B|")
      ->capture_default_str();
  cmd->add_option("--dataset", a.dataset, "local dataset size m")
      ->capture_default_str();
  cmd->add_option("--delta", a.delta, "target delta")->capture_default_str();
  cmd->add_option("--log-base", a.log_base, "logarithm base: e or 10")
      ->capture_default_str();
  if (calibrate) {
    cmd->add_option("--epsilon", a.epsilon, "target epsilon")->required();
  } else {
    cmd->add_option("--sigma", a.sigma, "noise standard deviation")
        ->capture_default_str();
  }
}

void PrintBudgetLine(const ltadmm::PrivacyBudget& b, double sigma) {
  std::cout << "epsilon=" << ltadmm::FormatDouble(b.epsilon)
            << " alpha=" << ltadmm::FormatDouble(b.optimal_alpha)
            << " sigma=" << ltadmm::FormatDouble(sigma)
            << " valid=" << (b.valid ? "true" : "false") << "\n";
}

int RunAccountant(const AccountantArgs& a, bool calibrate) {
  const ltadmm::LogBase base = ltadmm::ParseLogBase(a.log_base);
  double sigma = a.sigma;
  if (calibrate) {
    sigma = ltadmm::CalibrateNoise(a.epsilon, a.delta, a.rounds, a.tau,
                                   a.zeta, a.batch, a.dataset, base);
  }
  const ltadmm::MechanismParams params{a.zeta, sigma, a.batch, a.dataset};
  PrintBudgetLine(
      ltadmm::ComposeBudget(params, a.rounds, a.tau, a.delta, base), sigma);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LT-ADMM-DP decentralized learning simulator"};
  app.require_subcommand(1);

  std::string cfg_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> sigma_g;
  std::optional<std::string> log_base;
  std::string out_path = "metrics.csv";
  bool force = false;

  auto* run = app.add_subcommand("run", "run an experiment from a config");
  run->add_option("config", cfg_path, "config file")->required();
  run->add_option("--seed", seed, "override algorithm.seed");
  run->add_option("--out", out_path, "metrics CSV path")
      ->capture_default_str();
  run->add_flag("--force", force, "run even if the beta bound fails");
  run->add_option("--workers", workers, "worker threads for local training");
  run->add_option("--sigma-g", sigma_g, "override the sigma_g estimate");
  run->add_option("--log-base", log_base, "accountant log base: e or 10");

  AccountantArgs acc;
  auto* accountant =
      app.add_subcommand("accountant", "privacy budget for given noise");
  AddAccountantOptions(accountant, acc, false);
  AccountantArgs cal;
  auto* calibrate =
      app.add_subcommand("calibrate", "noise level for a target epsilon");
  AddAccountantOptions(calibrate, cal, true);

  auto* spectrum = app.add_subcommand("spectrum", "Laplacian spectrum");
  spectrum->add_option("config", cfg_path, "config file")->required();
  auto* check = app.add_subcommand("check", "step-size report");
  check->add_option("config", cfg_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*accountant) return RunAccountant(acc, false);
    if (*calibrate) return RunAccountant(cal, true);

    ltadmm::ExperimentConfig cfg = ltadmm::LoadConfig(cfg_path);
    if (seed) cfg.run.master_seed = *seed;
    if (workers) cfg.run.workers = *workers;
    if (sigma_g) cfg.diagnostics.sigma_g = *sigma_g;
    if (log_base) cfg.run.log_base = ltadmm::ParseLogBase(*log_base);

    if (*spectrum) {
      const auto info =
          ltadmm::ComputeSpectralInfo(ltadmm::BuildTopology(cfg.network));
      std::cout << "n_agents=" << cfg.network.n_agents << "\n"
                << "lambda_l=" << ltadmm::FormatDouble(info.lambda_min_nonzero)
                << "\n"
                << "lambda_u=" << ltadmm::FormatDouble(info.lambda_max) << "\n"
                << "max_degree=" << info.max_degree << "\n"
                << "beta_bound="
                << ltadmm::FormatDouble(
                       ltadmm::BetaBound(info, cfg.run.tau, cfg.run.rho))
                << "\n";
      return kExitOk;
    }
    if (*check) {
      ltadmm::ValidateRunConfig(cfg.run);
      const auto prep = ltadmm::Prepare(cfg);
      std::cout << ltadmm::FormatStepsizeReport(prep.stepsize, cfg.run);
      return prep.stepsize.beta_ok ? kExitOk : kExitStepsize;
    }

    try {
      const auto result = ltadmm::RunExperiment(cfg, force);
      std::ofstream csv(out_path);
      if (!csv) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitConfig;
      }
      ltadmm::WriteMetricsCsv(csv, result.metrics);
      std::cout << ltadmm::EmitSummary(result.metrics, &result);
    } catch (const ltadmm::DivergenceError& e) {
      std::ofstream csv(out_path);
      if (csv) ltadmm::WriteMetricsCsv(csv, e.history());
      std::cerr << "error: " << e.what() << "\n";
      return kExitDivergence;
    }
    return kExitOk;
  } catch (const ltadmm::StepsizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "rerun with --force to ignore\n";
    return kExitStepsize;
  } catch (const ltadmm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ltadmm::ErrorCode::kDivergence ? kExitDivergence
                                                       : kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
