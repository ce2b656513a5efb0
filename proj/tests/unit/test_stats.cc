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

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "glor/core/errors.h"
#include "glor/core/random.h"
#include "glor/stats/agreement.h"
#include "glor/stats/bradley_terry.h"
#include "glor/stats/mann_whitney.h"
#include "oracles.h"

namespace glor::stats {
namespace {

// Expected win counts for planted strengths, rounded.
WinMatrix Planted(const std::vector<double>& strengths, uint64_t per_pair) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < strengths.size(); ++i) names.push_back("m" + std::to_string(i));
  WinMatrix m = WinMatrix::Zero(names);
  for (std::size_t i = 0; i < strengths.size(); ++i) {
    for (std::size_t j = i + 1; j < strengths.size(); ++j) {
      const auto wi = static_cast<uint64_t>(
          std::llround(per_pair * strengths[i] / (strengths[i] + strengths[j])));
      m.wins[i][j] = wi;
      m.wins[j][i] = per_pair - wi;
    }
  }
  return m;
}

using glor::testing::GridMax3;
using glor::testing::OracleExactP;
using glor::testing::OracleLogLik;
using glor::testing::PairwiseU;

TEST_CASE("planted 4:2:1 strengths are recovered and match the grid oracle") {
  const WinMatrix m = Planted({4, 2, 1}, 200);
  CHECK(m.wins[0][1] == 133);
  CHECK(m.wins[1][0] == 67);
  CHECK(m.wins[0][2] == 160);
  CHECK(m.wins[2][0] == 40);
  CHECK(m.wins[1][2] == 133);
  CHECK(m.wins[2][1] == 67);
  const BTResult r = FitBradleyTerry(m);
  CHECK(r.converged);
  CHECK(r.ranking == std::vector<std::string>{"m0", "m1", "m2"});
  CHECK(r.log_likelihood == doctest::Approx(OracleLogLik(m, r.alpha, r.strengths)).epsilon(1e-12));
  const double grid = GridMax3(m, r.alpha);
  CHECK(r.log_likelihood >= grid - 1e-9);
  CHECK(std::abs(r.log_likelihood - grid) < 1e-3);
  for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i) {
    CHECK(r.log_likelihood_trace[i] >= r.log_likelihood_trace[i - 1] - 1e-12);
  }
  CHECK(r.strengths[0] / r.strengths[1] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(r.strengths[1] / r.strengths[2] == doctest::Approx(2.0).epsilon(0.05));
  // Geometric mean normalization.
  CHECK(std::log(r.strengths[0]) + std::log(r.strengths[1]) + std::log(r.strengths[2]) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("six-model planted ordering is recovered") {
  const std::vector<double> planted = {1.0, 7.0, 2.5, 0.4, 4.0, 1.6};
  const BTResult r = FitBradleyTerry(Planted(planted, 20));
  CHECK(r.ranking == std::vector<std::string>{"m1", "m4", "m2", "m5", "m0", "m3"});
}

TEST_CASE("a disconnected win graph is degenerate without smoothing") {
  WinMatrix m = WinMatrix::Zero({"a", "b", "c", "d"});
  m.AddWin("a", "b", 3);
  m.AddWin("b", "a", 1);
  m.AddWin("c", "d", 2);
  m.AddWin("d", "c", 2);
  BTOptions o;
  o.alpha = 0.0;
  CHECK_THROWS_AS(FitBradleyTerry(m, o), DegenerateError);
  CHECK(WinGraphComponents(m, 0.0).size() == 2);
  CHECK_NOTHROW(FitBradleyTerry(m));
}

TEST_CASE("rank ties break by name and ignore rescaling") {
  const std::vector<std::string> names = {"b", "a", "c"};
  CHECK(Rank(names, std::vector<double>{1.0, 1.0, 2.0}) ==
        std::vector<std::string>{"c", "a", "b"});
  CHECK(Rank(names, std::vector<double>{3.0, 3.0, 6.0}) ==
        std::vector<std::string>{"c", "a", "b"});
}

TEST_CASE("win matrix validation and json round trip") {
  WinMatrix m = WinMatrix::Zero({"x", "y"});
  m.AddWin("x", "y", 5);
  CHECK(m.Total() == 5);
  CHECK(WinMatrix::FromJson(m.ToJson()).wins == m.wins);
  CHECK_THROWS_AS(m.AddWin("x", "z"), UsageError);
  WinMatrix bad{{"x", "x"}, {{0, 1}, {1, 0}}};
  CHECK_THROWS_AS(bad.Validate(), UsageError);
}

TEST_CASE("Cohen's kappa hand case is exactly 0.4") {
  // 20 both A, 5 a=A b=B, 10 a=B b=A, 15 both B.
  std::vector<std::string> a, b;
  auto add = [&](const char* x, const char* y, int n) {
    for (int i = 0; i < n; ++i) {
      a.push_back(x);
      b.push_back(y);
    }
  };
  add("A", "A", 20);
  add("A", "B", 5);
  add("B", "A", 10);
  add("B", "B", 15);
  const KappaResult k = CohenKappa(a, b);
  CHECK(k.p_o == 0.7);
  CHECK(k.p_e == 0.5);
  CHECK(k.kappa == 0.4);
}

TEST_CASE("91 items with 90 agreements give kappa near 0.978") {
  std::vector<Choice> a, b;
  for (int i = 0; i < 45; ++i) {
    a.push_back(Choice::kA);
    b.push_back(Choice::kA);
  }
  for (int i = 0; i < 45; ++i) {
    a.push_back(Choice::kB);
    b.push_back(Choice::kB);
  }
  a.push_back(Choice::kA);
  b.push_back(Choice::kB);
  const KappaResult k = CohenKappa(a, b);
  CHECK(k.agreements == 90);
  CHECK(std::abs(k.p_e - 0.5) < 1e-3);
  CHECK(std::abs(k.kappa - 0.978) <= 5e-4);
}

TEST_CASE("kappa edge cases") {
  const std::vector<std::string> same = {"A", "A", "A"};
  CHECK_THROWS_AS(CohenKappa(same, same), DegenerateError);
  const std::vector<std::string> shorter = {"A", "B"};
  CHECK_THROWS_AS(CohenKappa(same, shorter), UsageError);
  const std::vector<std::string> x = {"A", "B", "A", "B"};
  CHECK(CohenKappa(x, x).kappa == 1.0);
}

TEST_CASE("mode aggregation needs an odd number of judges") {
  const std::vector<std::vector<Choice>> three = {
      {Choice::kA, Choice::kB, Choice::kA},
      {Choice::kA, Choice::kA, Choice::kB},
      {Choice::kB, Choice::kB, Choice::kB}};
  CHECK(ModeAggregate(three) == std::vector<Choice>{Choice::kA, Choice::kB, Choice::kB});
  const std::vector<std::vector<Choice>> two = {{Choice::kA}, {Choice::kB}};
  CHECK_THROWS_AS(ModeAggregate(two), UsageError);
  CHECK(ParseChoice("a") == Choice::kA);
  CHECK_THROWS_AS(ParseChoice("C"), UsageError);
}

// --- Mann-Whitney -----------------------------------------------------------

TEST_CASE("Mann-Whitney worked examples") {
  const auto r = MannWhitneyU(std::vector<double>{5, 7}, std::vector<double>{1, 2, 3});
  CHECK(r.u1 == 6);
  CHECK(r.u2 == 0);
  CHECK(r.exact);
  CHECK(r.p == doctest::Approx(0.1).epsilon(1e-12));
  const auto s = MannWhitneyU(std::vector<double>{3, 1}, std::vector<double>{2});
  CHECK(s.u1 == 1);
  CHECK(s.p == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("Mann-Whitney matches exhaustive enumeration for n1 + n2 <= 10") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n1 = 1 + rng.Below(6);
    const std::size_t n2 = 1 + rng.Below(10 - n1);
    std::vector<double> x(n1), y(n2);
    // Small integer range forces frequent ties.
    for (double& v : x) v = static_cast<double>(rng.Below(6));
    for (double& v : y) v = static_cast<double>(rng.Below(6));
    bool constant = true;
    for (double v : x) constant &= v == x[0];
    for (double v : y) constant &= v == x[0];
    if (constant) {
      CHECK_THROWS_AS(MannWhitneyU(x, y), DegenerateError);
      continue;
    }
    for (Alternative alt : {Alternative::kGreater, Alternative::kLess, Alternative::kTwoSided}) {
      const auto r = MannWhitneyU(x, y, alt);
      CHECK(r.u1 == PairwiseU(x, y));
      CHECK(r.u1 + r.u2 == static_cast<double>(n1 * n2));
      CHECK(r.p == doctest::Approx(OracleExactP(x, y, alt)).epsilon(1e-12));
    }
  }
}

TEST_CASE("normal approximation for larger samples") {
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i + 12.5);
    y.push_back(i);
  }
  const auto r = MannWhitneyU(x, y);
  CHECK_FALSE(r.exact);
  const double n1 = 40, n2 = 40;
  const double sigma = std::sqrt(n1 * n2 * (n1 + n2 + 1) / 12.0);
  CHECK(r.sigma_u == doctest::Approx(sigma).epsilon(1e-12));
  const double z = (PairwiseU(x, y) - n1 * n2 / 2 - 0.5) / sigma;
  CHECK(r.z == doctest::Approx(z).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(0.5 * std::erfc(z / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("a shifted long-response sample gives a tiny p-value") {
  Rng rng(99);
  std::vector<double> long_words, short_words;
  for (int i = 0; i < 300; ++i) {
    long_words.push_back(80 + static_cast<double>(rng.Below(120)));
    short_words.push_back(20 + static_cast<double>(rng.Below(100)));
  }
  const auto r = MannWhitneyU(long_words, short_words);
  CHECK(r.p < 1e-6);
  CHECK(r.u1 > r.mu_u);
  // Underflow is displayed, not hidden.
  std::vector<double> far_x, far_y;
  for (int i = 0; i < 2000; ++i) {
    far_x.push_back(10000 + i);
    far_y.push_back(i);
  }
  const auto f = MannWhitneyU(far_x, far_y);
  CHECK(f.PDisplay() == "< 1e-308");
}

}  // namespace
}  // namespace glor::stats
