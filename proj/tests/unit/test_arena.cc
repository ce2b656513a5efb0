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

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "glor/arena/arena.h"
#include "glor/core/errors.h"
#include "test_util.h"

namespace glor::arena {
namespace {

const std::vector<std::string> kSix = {"gpt-5",          "claude-4-sonnet", "gemini-2.5-pro",
                                       "llama-3.1-70b", "gpt-4o",          "mistral-large"};

std::vector<SeedText> Pool(const std::string& name, int n) {
  std::vector<SeedText> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({name + ":" + std::to_string(i), name, "Téacs síl " + name + " " + std::to_string(i)});
  }
  return out;
}

std::vector<QAPair> Generations(const std::vector<std::string>& models,
                                const std::vector<SeedText>& seeds) {
  std::vector<QAPair> out;
  for (const auto& m : models) {
    for (const auto& s : seeds) {
      out.push_back({s.id, m, "Ceist ar " + s.id + "?", "Freagra ó " + m + " ar " + s.id + "."});
    }
  }
  return out;
}

struct Fixture {
  std::vector<SeedText> a = Pool("wiki", 10), b = Pool("news", 10);
  std::vector<SeedText> all() const {
    auto v = a;
    v.insert(v.end(), b.begin(), b.end());
    return v;
  }
};

TEST_CASE("six models and eight per pair give 120 comparisons") {
  Fixture f;
  const auto gens = Generations(kSix, f.all());
  const auto cs = SchedulePairs(kSix, f.a, f.b, gens, {8, 42});
  CHECK(cs.size() == 120);
  std::map<std::pair<std::string, std::string>, int> per_pair;
  std::map<std::string, int> pool_use;
  std::set<std::string> keys;
  for (const auto& c : cs) {
    CHECK(c.model_a < c.model_b);
    ++per_pair[{c.model_a, c.model_b}];
    ++pool_use[c.seed_ref.substr(0, c.seed_ref.find(':'))];
    keys.insert(c.key);
    CHECK(c.mode == Mode::kGeneration);
  }
  CHECK(per_pair.size() == 15);
  for (const auto& [pair, n] : per_pair) CHECK(n == 8);
  CHECK(pool_use["wiki"] == 60);
  CHECK(pool_use["news"] == 60);
  CHECK(keys.size() == 120);
}

TEST_CASE("two models and one per pair give a single comparison") {
  Fixture f;
  const std::vector<std::string> two = {"b-model", "a-model"};
  const auto cs = SchedulePairs(two, f.a, f.b, Generations(two, f.all()), {1, 3});
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].model_a == "a-model");
  CHECK(cs[0].model_b == "b-model");
}

TEST_CASE("scheduling rejects bad arguments") {
  Fixture f;
  const auto gens = Generations(kSix, f.all());
  const std::vector<std::string> one = {"gpt-5"};
  CHECK_THROWS_AS(SchedulePairs(one, f.a, f.b, gens, {8, 1}), UsageError);
  CHECK_THROWS_AS(SchedulePairs(kSix, f.a, f.b, gens, {0, 1}), UsageError);
  CHECK_THROWS_AS(SchedulePairs(kSix, f.a, {}, gens, {8, 1}), UsageError);
}

TEST_CASE("comparison keys are the pinned stable key") {
  CHECK(ComparisonKey(Mode::kGeneration, "claude-4-sonnet", "gpt-5", "wiki:1") == "e850f9bc0b02ad34");
  CHECK(ComparisonKey(Mode::kGeneration, "claude-4-sonnet", "gpt-5", "wiki:1", 1) !=
        ComparisonKey(Mode::kGeneration, "claude-4-sonnet", "gpt-5", "wiki:1"));
  CHECK(ComparisonKey(Mode::kGeneration, "a", "b", "s") !=
        ComparisonKey(Mode::kPreferenceValidation, "a", "b", "s"));
}

TEST_CASE("a rebuild is byte-identical and the file round-trips") {
  Fixture f;
  const auto gens = Generations(kSix, f.all());
  const std::string dir = glor::testing::TempDir("arena_rebuild");
  WriteComparisons(dir + "/one.jsonl", SchedulePairs(kSix, f.a, f.b, gens, {8, 42}));
  std::vector<std::string> shuffled = kSix;
  std::reverse(shuffled.begin(), shuffled.end());
  auto gens2 = gens;
  std::reverse(gens2.begin(), gens2.end());
  WriteComparisons(dir + "/two.jsonl", SchedulePairs(shuffled, f.a, f.b, gens2, {8, 42}));
  const std::string one = glor::testing::ReadFile(dir + "/one.jsonl");
  CHECK_FALSE(one.empty());
  CHECK(one == glor::testing::ReadFile(dir + "/two.jsonl"));
  const auto back = ReadComparisons(dir + "/one.jsonl");
  CHECK(back.size() == 120);
  WriteComparisons(dir + "/three.jsonl", back);
  CHECK(glor::testing::ReadFile(dir + "/three.jsonl") == one);

  const auto other = SchedulePairs(kSix, f.a, f.b, gens, {8, 43});
  WriteComparisons(dir + "/four.jsonl", other);
  CHECK(glor::testing::ReadFile(dir + "/four.jsonl") != one);

  glor::testing::WriteFile(dir + "/dup.jsonl", one.substr(0, one.find('\n') + 1) +
                                                   one.substr(0, one.find('\n') + 1));
  CHECK_THROWS_AS(ReadComparisons(dir + "/dup.jsonl"), ValidationError);
}

TEST_CASE("missing generations are reported together") {
  Fixture f;
  auto gens = Generations(kSix, f.all());
  gens.erase(std::remove_if(gens.begin(), gens.end(),
                            [](const QAPair& q) {
                              return (q.model == "gpt-4o" && q.seed_ref == "wiki:3") ||
                                     (q.model == "mistral-large" && q.seed_ref == "news:7");
                            }),
             gens.end());
  try {
    SchedulePairs(kSix, f.a, f.b, gens, {8, 42});
    FAIL("expected NotFoundError");
  } catch (const NotFoundError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("gpt-4o") != std::string::npos);
    CHECK(msg.find("wiki:3") != std::string::npos);
    CHECK(msg.find("mistral-large") != std::string::npos);
    CHECK(msg.find("news:7") != std::string::npos);
  }
}

TEST_CASE("display swap is balanced") {
  Fixture f;
  const std::vector<std::string> two = {"x-model", "y-model"};
  const auto cs = SchedulePairs(two, f.a, f.b, Generations(two, f.all()), {1000, 9});
  REQUIRE(cs.size() == 1000);
  const auto swapped = std::count_if(cs.begin(), cs.end(), [](const Comparison& c) { return c.display_swap; });
  CHECK(swapped >= 450);
  CHECK(swapped <= 550);
}

TEST_CASE("annotator views hide model identity") {
  Fixture f;
  const auto cs = SchedulePairs(kSix, f.a, f.b, Generations(kSix, f.all()), {8, 42});
  for (const auto& c : cs) {
    const Json v = c.AnnotatorView();
    CHECK_FALSE(v.contains("model_a"));
    CHECK_FALSE(v.contains("model_b"));
    CHECK_FALSE(v.contains("display_swap"));
    CHECK_FALSE(v.contains("intended"));
    CHECK(v["question"] == std::string(QuestionFor(Mode::kGeneration)));
    CHECK(v["a"] == (c.display_swap ? c.payload_b : c.payload_a));
  }
  // The generations name their model; the build redacts every mention.
  CHECK(FindNameLeaks(cs, kSix).empty());
  bool redacted = false;
  for (const auto& c : cs) redacted |= c.payload_a["answer"].get<std::string>().find("[model]") != std::string::npos;
  CHECK(redacted);

  auto leaky = cs;
  leaky[0].context = "Written by Claude-4-Sonnet";
  const auto leaks = FindNameLeaks(leaky, kSix);
  REQUIRE(leaks.size() == 1);
  CHECK(leaks[0].find(leaky[0].key) == 0);
}

TEST_CASE("redaction is case-insensitive") {
  const std::vector<std::string> names = {"gpt-5", "claude"};
  CHECK(RedactNames("I am GPT-5, not Claude.", names) == "I am [model], not [model].");
  CHECK(RedactNames("nothing here", names) == "nothing here");
}

TEST_CASE("resolve truth table") {
  Comparison c;
  c.model_a = "m1";
  c.model_b = "m2";
  c.display_swap = false;
  CHECK(c.Resolve(stats::Choice::kA) == "m1");
  CHECK(c.Resolve(stats::Choice::kB) == "m2");
  c.display_swap = true;
  CHECK(c.Resolve(stats::Choice::kA) == "m2");
  CHECK(c.Resolve(stats::Choice::kB) == "m1");
}

std::vector<PreferencePair> Pairs(int n) {
  std::vector<PreferencePair> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"Leid " + std::to_string(i), "Freagra maith " + std::to_string(i),
                   "freagra lag " + std::to_string(i), "pp-" + std::to_string(i), "accepted"});
  }
  return out;
}

TEST_CASE("preference validation samples 91 anonymous items") {
  const auto pairs = Pairs(300);
  const auto cs = BuildPreferenceValidation(pairs, 91, 11);
  REQUIRE(cs.size() == 91);
  std::set<std::string> refs, keys;
  int swapped = 0;
  for (const auto& c : cs) {
    CHECK(c.mode == Mode::kPreferenceValidation);
    CHECK(c.model_a == kAccepted);
    CHECK(c.model_b == kRejected);
    CHECK(c.intended == "accepted");
    refs.insert(c.seed_ref);
    keys.insert(c.key);
    swapped += c.display_swap;
    const Json v = c.AnnotatorView();
    CHECK_FALSE(v.contains("intended"));
    const std::string dumped = v.dump();
    CHECK(dumped.find("accepted") == std::string::npos);
    CHECK(dumped.find("rejected") == std::string::npos);
    // The accepted response is shown on the resolved side.
    const stats::Choice good = c.display_swap ? stats::Choice::kB : stats::Choice::kA;
    CHECK(c.Resolve(good) == kAccepted);
  }
  CHECK(refs.size() == 91);
  CHECK(keys.size() == 91);
  CHECK(swapped > 20);
  CHECK(swapped < 71);
  CHECK(BuildPreferenceValidation(pairs, 91, 11).front().key == cs.front().key);
  CHECK_THROWS_AS(BuildPreferenceValidation(Pairs(50), 91, 11), UsageError);
}

TEST_CASE("mode names round-trip") {
  for (Mode m : {Mode::kGeneration, Mode::kPreferenceValidation}) CHECK(ParseMode(ModeName(m)) == m);
  CHECK_THROWS_AS(ParseMode("arena"), UsageError);
}

}  // namespace
}  // namespace glor::arena
