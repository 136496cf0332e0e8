// Copyright 2026 The drsolve Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRSOLVE_STATIONARITY_TYPES_HPP
#define DRSOLVE_STATIONARITY_TYPES_HPP

#include <vector>

namespace drsolve::stationarity {

/// Activity partition of a complementary pair (y, w): indices with y > 0,
/// with w > 0, and the biactive ones where both vanish.
struct IndexPartition {
  std::vector<int> plus_zero;  // y_i > 0, w_i = 0
  std::vector<int> zero_plus;  // y_i = 0, w_i > 0
  std::vector<int> zero_zero;  // y_i = 0, w_i = 0
  double tol_act = 1e-7;

  int size() const {
    return static_cast<int>(plus_zero.size() + zero_plus.size() +
                            zero_zero.size());
  }
};

enum class StationarityClass { kNone, kW, kC, kM, kS };

const char* to_string(StationarityClass k);

}  // namespace drsolve::stationarity

#endif  // DRSOLVE_STATIONARITY_TYPES_HPP
