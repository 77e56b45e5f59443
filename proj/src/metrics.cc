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

#include "ltadmm/metrics.h"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ltadmm/error.h"
#include "ltadmm/format.h"

namespace ltadmm {

const char* RegimeName(Regime regime) {
  return regime == Regime::kK1 ? "K1" : "K2";
}

double CostPerBlock(const CostModel& model, Algorithm algorithm, int tau) {
  if (tau < 1) throw Error(ErrorCode::kDomain, "tau must be >= 1");
  switch (algorithm) {
    case Algorithm::kLtAdmmDp:
      return tau * model.t_g + model.t_c;
    case Algorithm::kPorter:
      return tau * (model.t_g + 2.0 * model.t_c);
    case Algorithm::kPrisma:
      return tau * (2.0 * model.t_g + model.t_c);
  }
  throw Error(ErrorCode::kInternal, "unknown algorithm");
}

double ClippedStationarity(std::span<const RoundMetrics> metrics, double zeta,
                           double sigma_g) {
  if (metrics.empty()) return 0.0;
  double total = 0.0;
  for (const auto& m : metrics) {
    if (ClassifyRegime(m.grad_norm, zeta) == Regime::kK1) {
      total += (zeta / 4.0 - 2.0 * sigma_g) * m.grad_norm;
    } else {
      total += 0.25 * m.grad_norm * m.grad_norm;
    }
  }
  return total / static_cast<double>(metrics.size());
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::kInternal, "format failed");
  return std::string(buf, end);
}

double ParseDouble(const std::string& text) {
  if (text == "inf" || text == "+inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return value;
}

}  // namespace ltadmm
