// Copyright 2026 The adtheme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace adtheme::util {

// Rounds half away from zero at two decimals. The small bias absorbs binary
// representation error so that 2.345 (stored as 2.34499...) renders as 2.35.
inline double round_half_up_2(double value) {
  const double scaled = std::fabs(value) * 100.0;
  const double rounded = std::floor(scaled + 0.5 + 1e-9) / 100.0;
  return value < 0 ? -rounded : rounded;
}

inline std::string fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round_half_up_2(value));
  return buf;
}

inline std::string percent(double value) { return fixed2(value) + "%"; }

inline std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace adtheme::util
