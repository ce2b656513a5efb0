// Copyright 2026 The Glor Authors
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
#ifndef GLOR_STATS_AGREEMENT_H_
#define GLOR_STATS_AGREEMENT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/records.h"

namespace glor::stats {

enum class Choice { kA, kB };

std::string_view ChoiceName(Choice c);
// "A" or "B" (case-insensitive). Throws UsageError otherwise.
Choice ParseChoice(std::string_view s);

// Per-item majority over an odd number of judges. Every judge list must have
// the same length. Throws UsageError on an even judge count.
std::vector<Choice> ModeAggregate(std::span<const std::vector<Choice>> judges);

struct KappaResult {
  uint64_t n = 0;
  uint64_t agreements = 0;
  double p_o = 0.0;
  double p_e = 0.0;
  double kappa = 0.0;

  Json ToJson() const;
};

// Cohen's kappa over arbitrary category labels:
//   p_o = agreements / n,  p_e = sum_c (a_c / n) (b_c / n),
//   kappa = (p_o - p_e) / (1 - p_e),
// evaluated as (n * agreements - S) / (n^2 - S) with S = sum_c a_c b_c in
// integers. Throws DegenerateError when p_e = 1.
KappaResult CohenKappa(std::span<const std::string> a, std::span<const std::string> b);
KappaResult CohenKappa(std::span<const Choice> a, std::span<const Choice> b);

}  // namespace glor::stats

#endif  // GLOR_STATS_AGREEMENT_H_
