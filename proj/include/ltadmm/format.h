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

#ifndef LTADMM_FORMAT_H_
#define LTADMM_FORMAT_H_

#include <string>

namespace ltadmm {

// Shortest representation that parses back to the same double; "inf" and
// "nan" for non-finite values.
std::string FormatDouble(double value);

// Strict parse of a whole string; throws std::invalid_argument.
double ParseDouble(const std::string& text);

}  // namespace ltadmm

#endif  // LTADMM_FORMAT_H_
