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

#include "ltadmm/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ltadmm/error.h"
#include "ltadmm/format.h"

namespace ltadmm {

namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int ParseInt(const std::string& text) {
  Int value{};
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not an integer: '" + text + "'");
  }
  return value;
}

bool ParseBool(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw std::invalid_argument("not a boolean: '" + text + "'");
}

std::vector<Edge> ParseEdges(const std::string& text) {
  std::vector<Edge> edges;
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream tokens(spaced);
  std::string token;
  while (tokens >> token) {
    const auto dash = token.find('-');
    if (dash == std::string::npos) {
      throw std::invalid_argument("edge must look like i-j, got '" + token +
                                  "'");
    }
    edges.emplace_back(ParseInt<int>(token.substr(0, dash)),
                       ParseInt<int>(token.substr(dash + 1)));
  }
  return edges;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

std::map<std::string, Setter> BuildSetters() {
  std::map<std::string, Setter> s;
  s["network.topology"] = [](ExperimentConfig& c, const std::string& v) {
    if (v != "ring" && v != "complete" && v != "edges") {
      throw std::invalid_argument("topology must be ring, complete or edges");
    }
    c.network.topology = v;
  };
  s["network.n_agents"] = [](ExperimentConfig& c, const std::string& v) {
    c.network.n_agents = ParseInt<int>(v);
  };
  s["network.edges"] = [](ExperimentConfig& c, const std::string& v) {
    c.network.edges = ParseEdges(v);
  };
  s["data.samples_per_agent"] = [](ExperimentConfig& c, const std::string& v) {
    c.data.synthetic.samples_per_agent = ParseInt<int>(v);
  };
  s["data.dim"] = [](ExperimentConfig& c, const std::string& v) {
    c.data.synthetic.dim = ParseInt<int>(v);
  };
  s["data.separation"] = [](ExperimentConfig& c, const std::string& v) {
    c.data.synthetic.separation = ParseDouble(v);
  };
  s["data.heterogeneity"] = [](ExperimentConfig& c, const std::string& v) {
    c.data.synthetic.heterogeneity = ParseDouble(v);
  };
  s["data.test_fraction"] = [](ExperimentConfig& c, const std::string& v) {
    c.data.synthetic.test_fraction = ParseDouble(v);
  };
  s["data.seed"] = [](ExperimentConfig& c, const std::string& v) {
    c.data.synthetic.seed = ParseInt<std::uint64_t>(v);
  };
  s["data.csv_dir"] = [](ExperimentConfig& c, const std::string& v) {
    c.data.csv_dir = v;
  };
  s["objective.reg_weight"] = [](ExperimentConfig& c, const std::string& v) {
    c.objective.reg_weight = ParseDouble(v);
    if (c.objective.reg_weight < 0.0) {
      throw std::invalid_argument("reg_weight must be >= 0");
    }
  };
  s["algorithm.gamma"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.gamma = ParseDouble(v);
  };
  s["algorithm.beta"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.beta = ParseDouble(v);
  };
  s["algorithm.rho"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.rho = ParseDouble(v);
  };
  s["algorithm.tau"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.tau = ParseInt<int>(v);
  };
  s["algorithm.rounds"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.rounds = ParseInt<long>(v);
  };
  s["algorithm.batch_size"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.mechanism.batch_size = ParseInt<int>(v);
  };
  s["algorithm.zeta"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.mechanism.clip_threshold = ParseDouble(v);
  };
  s["algorithm.sigma_e"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.mechanism.noise_std = ParseDouble(v);
  };
  s["algorithm.clipping"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.clipping_enabled = ParseBool(v);
  };
  s["algorithm.noise"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.noise_enabled = ParseBool(v);
  };
  s["algorithm.full_batch"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.full_batch = ParseBool(v);
  };
  s["algorithm.seed"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.master_seed = ParseInt<std::uint64_t>(v);
  };
  s["algorithm.workers"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.workers = ParseInt<int>(v);
  };
  s["privacy.delta"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.delta = ParseDouble(v);
  };
  s["privacy.log_base"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.log_base = ParseLogBase(v);
  };
  s["cost.t_g"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.cost.t_g = ParseDouble(v);
  };
  s["cost.t_c"] = [](ExperimentConfig& c, const std::string& v) {
    c.run.cost.t_c = ParseDouble(v);
  };
  s["diagnostics.probe_count"] = [](ExperimentConfig& c,
                                    const std::string& v) {
    c.diagnostics.probe_count = ParseInt<int>(v);
  };
  s["diagnostics.probe_radius"] = [](ExperimentConfig& c,
                                     const std::string& v) {
    c.diagnostics.probe_radius = ParseDouble(v);
  };
  s["diagnostics.sigma_g"] = [](ExperimentConfig& c, const std::string& v) {
    c.diagnostics.sigma_g = ParseDouble(v);
  };
  s["diagnostics.gamma_heuristic_c"] = [](ExperimentConfig& c,
                                          const std::string& v) {
    c.diagnostics.gamma_heuristic_c = ParseDouble(v);
  };
  return s;
}

}  // namespace

LogBase ParseLogBase(const std::string& text) {
  if (text == "e" || text == "natural" || text == "ln") {
    return LogBase::kNatural;
  }
  if (text == "10") return LogBase::kBase10;
  throw std::invalid_argument("log_base must be e or 10, got '" + text + "'");
}

ExperimentConfig ParseConfig(std::istream& in, const std::string& source) {
  static const std::map<std::string, Setter> setters = BuildSetters();
  ExperimentConfig cfg;
  std::string section;
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kConfig,
                source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    const std::string line =
        Trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    auto it = setters.find(full);
    if (it == setters.end()) fail("unknown key '" + full + "'");
    if (value.empty()) fail("empty value for '" + full + "'");
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      fail(full + ": " + e.what());
    } catch (const std::out_of_range&) {
      fail(full + ": value out of range");
    }
  }
  cfg.data.synthetic.n_agents = cfg.network.n_agents;
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config " + path);
  ExperimentConfig cfg = ParseConfig(in, path);
  const auto parent = std::filesystem::path(path).parent_path();
  cfg.base_dir = parent.empty() ? "." : parent.string();
  return cfg;
}

}  // namespace ltadmm
