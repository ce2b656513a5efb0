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
#ifndef GLOR_STATS_MANN_WHITNEY_H_
#define GLOR_STATS_MANN_WHITNEY_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "glor/core/records.h"

namespace glor::stats {

enum class Alternative { kGreater, kLess, kTwoSided };

std::string_view AlternativeName(Alternative alt);
Alternative ParseAlternative(std::string_view s);

// Pooled sizes up to this use exact enumeration for the reported p.
inline constexpr std::size_t kExactMaxTotal = 16;

struct MWUResult {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double u1 = 0.0;  // pairs with x > y, ties count 1/2
  double u2 = 0.0;
  double mu_u = 0.0;
  double sigma_u = 0.0;  // tie-corrected
  double z = 0.0;        // with 0.5 continuity correction
  double p_normal = 0.0;
  std::optional<double> p_exact;
  double p = 0.0;  // exact when available, normal otherwise
  bool exact = false;
  Alternative alternative = Alternative::kGreater;

  // "< 1e-308" when p underflowed to zero or a subnormal.
  std::string PDisplay() const;
  Json ToJson() const;
};

// Mann-Whitney U test of whether x is stochastically greater than y (or less,
// or either). Throws UsageError on an empty sample and DegenerateError when
// every value is identical (sigma_u = 0).
MWUResult MannWhitneyU(std::span<const double> x, std::span<const double> y,
                       Alternative alternative = Alternative::kGreater);

// Exact permutation p-value by enumerating every split of the pooled values
// into groups of sizes n1, n2. Ties are handled by the pooled values
// themselves. Throws UsageError when n1 + n2 > 30.
double ExactMannWhitneyP(std::span<const double> x, std::span<const double> y,
                         Alternative alternative);

}  // namespace glor::stats

#endif  // GLOR_STATS_MANN_WHITNEY_H_
