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
#include "glor/stats/agreement.h"

#include <map>

#include "glor/core/errors.h"

namespace glor::stats {

std::string_view ChoiceName(Choice c) { return c == Choice::kA ? "A" : "B"; }

Choice ParseChoice(std::string_view s) {
  if (s == "A" || s == "a") return Choice::kA;
  if (s == "B" || s == "b") return Choice::kB;
  throw UsageError("choice must be A or B, got '" + std::string(s) + "'");
}

std::vector<Choice> ModeAggregate(std::span<const std::vector<Choice>> judges) {
  if (judges.empty() || judges.size() % 2 == 0) {
    throw UsageError("mode aggregation needs an odd number of judges, got " +
                     std::to_string(judges.size()));
  }
  const std::size_t items = judges.front().size();
  for (const auto& j : judges) {
    if (j.size() != items) throw UsageError("judge lists differ in length");
  }
  std::vector<Choice> out(items);
  for (std::size_t i = 0; i < items; ++i) {
    std::size_t votes_a = 0;
    for (const auto& j : judges) votes_a += j[i] == Choice::kA;
    out[i] = 2 * votes_a > judges.size() ? Choice::kA : Choice::kB;
  }
  return out;
}

Json KappaResult::ToJson() const {
  Json j;
  j["n"] = n;
  j["agreements"] = agreements;
  j["p_o"] = p_o;
  j["p_e"] = p_e;
  j["kappa"] = kappa;
  return j;
}

KappaResult CohenKappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) throw UsageError("rater lists differ in length");
  if (a.empty()) throw UsageError("kappa needs at least one item");
  std::map<std::string, std::pair<uint64_t, uint64_t>> marginals;
  KappaResult r;
  r.n = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++r.agreements;
  }
  // Products fit comfortably: n^2 < 2^64 for any realistic annotation set.
  uint64_t chance = 0;
  for (const auto& [label, counts] : marginals) chance += counts.first * counts.second;
  const uint64_t n2 = r.n * r.n;
  const double n = static_cast<double>(r.n);
  r.p_o = static_cast<double>(r.agreements) / n;
  r.p_e = static_cast<double>(chance) / static_cast<double>(n2);
  if (chance == n2) {
    throw DegenerateError("kappa undefined: expected agreement p_e = 1 (degenerate marginals)");
  }
  r.kappa = (static_cast<double>(r.n * r.agreements) - static_cast<double>(chance)) /
            static_cast<double>(n2 - chance);
  return r;
}

KappaResult CohenKappa(std::span<const Choice> a, std::span<const Choice> b) {
  std::vector<std::string> la;
  std::vector<std::string> lb;
  for (Choice c : a) la.emplace_back(ChoiceName(c));
  for (Choice c : b) lb.emplace_back(ChoiceName(c));
  return CohenKappa(std::span<const std::string>(la), std::span<const std::string>(lb));
}

}  // namespace glor::stats
