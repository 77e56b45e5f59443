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

#ifndef LTADMM_CONFIG_H_
#define LTADMM_CONFIG_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "ltadmm/admm.h"
#include "ltadmm/data.h"
#include "ltadmm/graph.h"
#include "ltadmm/objective.h"

namespace ltadmm {

struct NetworkConfig {
  std::string topology = "ring";  // ring | complete | edges
  int n_agents = 10;
  std::vector<Edge> edges;
};

struct DataConfig {
  SyntheticOptions synthetic;
  // When set, shards are read from <csv_dir>/agent_<i>.csv and, if present,
  // <csv_dir>/agent_<i>_test.csv instead of being generated. Relative paths
  // resolve against the config file's directory.
  std::string csv_dir;
};

struct DiagnosticsConfig {
  int probe_count = 8;
  double probe_radius = 1.0;
  std::optional<double> sigma_g;
  double gamma_heuristic_c = kGammaHeuristicC;
};

struct ExperimentConfig {
  NetworkConfig network;
  DataConfig data;
  ObjectiveSpec objective;
  RunConfig run;
  DiagnosticsConfig diagnostics;
  // Directory of the file the config was read from.
  std::string base_dir = ".";
};

// Flat `key = value` text grouped by `[section]` headers; `#` and `;` start
// comments. Every key is optional and unknown keys are rejected. Errors are
// kConfig with "<source>:<line>: ..." context.
//
//   [network]     topology = ring|complete|edges, n_agents, edges = 0-1 1-2 ...
//   [data]        samples_per_agent, dim, separation (number or inf),
//                 heterogeneity, test_fraction, seed, csv_dir
//   [objective]   reg_weight
//   [algorithm]   gamma, beta, rho, tau, rounds, batch_size, zeta, sigma_e,
//                 clipping, noise, full_batch, seed, workers
//   [privacy]     delta, log_base = e|10
//   [cost]        t_g, t_c
//   [diagnostics] probe_count, probe_radius, sigma_g, gamma_heuristic_c
ExperimentConfig ParseConfig(std::istream& in,
                             const std::string& source = "<config>");
ExperimentConfig LoadConfig(const std::string& path);

LogBase ParseLogBase(const std::string& text);

}  // namespace ltadmm

#endif  // LTADMM_CONFIG_H_
