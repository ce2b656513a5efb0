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
#include "glor/stats/mann_whitney.h"

#include <algorithm>
#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "glor/core/errors.h"

namespace glor::stats {

namespace {

// Twice the U statistic of the masked subset against its complement, in
// integers so comparisons with the observed value are exact.
long long TwiceU(const std::vector<double>& pooled, uint32_t mask) {
  long long twice_u = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (!(mask >> i & 1u)) continue;
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (mask >> j & 1u) continue;
      if (pooled[i] > pooled[j]) {
        twice_u += 2;
      } else if (pooled[i] == pooled[j]) {
        twice_u += 1;
      }
    }
  }
  return twice_u;
}

double UpperTail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

std::string_view AlternativeName(Alternative alt) {
  switch (alt) {
    case Alternative::kGreater:
      return "greater";
    case Alternative::kLess:
      return "less";
    case Alternative::kTwoSided:
      return "two-sided";
  }
  return "greater";
}

Alternative ParseAlternative(std::string_view s) {
  if (s == "greater") return Alternative::kGreater;
  if (s == "less") return Alternative::kLess;
  if (s == "two-sided") return Alternative::kTwoSided;
  throw UsageError("alternative must be greater, less or two-sided");
}

double ExactMannWhitneyP(std::span<const double> x, std::span<const double> y,
                         Alternative alternative) {
  const std::size_t n = x.size() + y.size();
  if (n > 30) throw UsageError("exact enumeration limited to n1 + n2 <= 30");
  if (x.empty() || y.empty()) throw UsageError("both samples must be non-empty");
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const uint32_t observed_mask = (1u << x.size()) - 1u;
  const long long observed = TwiceU(pooled, observed_mask);
  const long long n1n2 = static_cast<long long>(x.size() * y.size());
  const long long center2 = n1n2;  // 2 * mean
  const long long observed_dev = std::llabs(observed - center2);

  uint64_t total = 0;
  uint64_t extreme = 0;
  const uint32_t limit = 1u << n;
  for (uint32_t mask = 0; mask < limit; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != x.size()) continue;
    ++total;
    const long long u = TwiceU(pooled, mask);
    bool hit = false;
    switch (alternative) {
      case Alternative::kGreater:
        hit = u >= observed;
        break;
      case Alternative::kLess:
        hit = u <= observed;
        break;
      case Alternative::kTwoSided:
        hit = std::llabs(u - center2) >= observed_dev;
        break;
    }
    extreme += hit;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

std::string MWUResult::PDisplay() const {
  if (p < DBL_MIN) return "< 1e-308";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", p);
  return buf;
}

Json MWUResult::ToJson() const {
  Json j;
  j["n1"] = n1;
  j["n2"] = n2;
  j["u1"] = u1;
  j["u2"] = u2;
  j["mu_u"] = mu_u;
  j["sigma_u"] = sigma_u;
  j["z"] = z;
  j["p_normal"] = p_normal;
  j["p_exact"] = p_exact ? Json(*p_exact) : Json(nullptr);
  j["p"] = p;
  j["p_display"] = PDisplay();
  j["exact"] = exact;
  j["alternative"] = AlternativeName(alternative);
  return j;
}

MWUResult MannWhitneyU(std::span<const double> x, std::span<const double> y,
                       Alternative alternative) {
  if (x.empty() || y.empty()) throw UsageError("Mann-Whitney U needs n1, n2 >= 1");
  MWUResult r;
  r.alternative = alternative;
  r.n1 = x.size();
  r.n2 = y.size();
  const std::size_t n = r.n1 + r.n2;

  // Midranks over the pooled sample.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(n);
  for (double v : x) pooled.emplace_back(v, true);
  for (double v : y) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_x = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second) rank_sum_x += midrank;
    }
    tie_term += t * t * t - t;
    i = j;
  }
  const double n1 = static_cast<double>(r.n1);
  const double n2 = static_cast<double>(r.n2);
  const double nn = static_cast<double>(n);
  r.u1 = rank_sum_x - n1 * (n1 + 1.0) / 2.0;
  r.u2 = n1 * n2 - r.u1;
  r.mu_u = n1 * n2 / 2.0;
  const double variance =
      n1 * n2 / 12.0 * ((nn + 1.0) - (n > 1 ? tie_term / (nn * (nn - 1.0)) : 0.0));
  r.sigma_u = variance > 0.0 ? std::sqrt(variance) : 0.0;
  if (r.sigma_u == 0.0) {
    throw DegenerateError("Mann-Whitney U undefined: all values identical (sigma_U = 0)");
  }
  switch (alternative) {
    case Alternative::kGreater:
      r.z = (r.u1 - r.mu_u - 0.5) / r.sigma_u;
      r.p_normal = UpperTail(r.z);
      break;
    case Alternative::kLess:
      r.z = (r.u1 - r.mu_u + 0.5) / r.sigma_u;
      r.p_normal = UpperTail(-r.z);
      break;
    case Alternative::kTwoSided:
      r.z = (std::max(r.u1, r.u2) - r.mu_u - 0.5) / r.sigma_u;
      r.p_normal = std::min(1.0, 2.0 * UpperTail(r.z));
      break;
  }
  r.p = r.p_normal;
  if (n <= kExactMaxTotal) {
    r.p_exact = ExactMannWhitneyP(x, y, alternative);
    r.p = *r.p_exact;
    r.exact = true;
  }
  return r;
}

}  // namespace glor::stats
