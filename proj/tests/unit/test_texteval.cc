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

#include "doctest.h"
#include "glor/core/errors.h"
#include "glor/core/random.h"
#include "glor/texteval/texteval.h"
#include "oracles.h"
#include "test_util.h"

namespace glor::texteval {
namespace {

using glor::testing::OracleBleu;

std::string RandomSentence(Rng& rng) {
  static const char* kWords[] = {"an", "madra", "mor", "ag", "rith", "sa", "pairc", "inniu"};
  const std::size_t n = 1 + rng.Below(12);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += kWords[rng.Below(8)];
  }
  return s;
}

TEST_CASE("a hypothesis identical to its reference scores 1") {
  const std::vector<std::string> h = {"Tá an madra ag rith.", "Dia duit, a chara!"};
  const BleuResult r = Bleu(h, h);
  CHECK(r.score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.brevity_penalty == 1.0);
}

TEST_CASE("tokenizer separates punctuation and lower-cases") {
  CHECK(BleuTokenize("Dia duit, A Chara!") ==
        std::vector<std::string>{"dia", "duit", ",", "a", "chara", "!"});
  CHECK(BleuTokenize("  ").empty());
}

TEST_CASE("corpus BLEU matches an independent scorer on random pairs") {
  Rng rng(5);
  std::vector<std::string> hyps, refs;
  for (int i = 0; i < 200; ++i) {
    hyps.push_back(RandomSentence(rng));
    refs.push_back(RandomSentence(rng));
  }
  for (int max_n : {1, 2, 4}) {
    const BleuResult r = Bleu(hyps, refs, max_n);
    CHECK(std::abs(r.score - OracleBleu(hyps, refs, max_n)) < 1e-6);
  }
  // Per-pair corpora, which exercise the epsilon floor and brevity penalty.
  for (int i = 0; i < 200; ++i) {
    const std::vector<std::string> h = {hyps[i]}, g = {refs[i]};
    CHECK(std::abs(Bleu(h, g).score - OracleBleu(h, g, 4)) < 1e-6);
  }
}

TEST_CASE("BLEU edge cases") {
  const std::vector<std::string> empty = {""}, ref = {"an madra"};
  CHECK(Bleu(empty, ref).score == 0.0);
  const std::vector<std::string> two = {"a", "b"};
  CHECK_THROWS_AS(Bleu(two, ref), UsageError);
  CHECK_THROWS_AS(Bleu(ref, ref, 0), UsageError);
  const BleuResult r = Bleu(ref, ref, 2);
  CHECK(r.precisions.size() == 2);
  CHECK(r.ToJson()["score"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("exact match normalizes case, punctuation and whitespace") {
  CHECK(NormalizeAnswer("  Baile Átha  Cliath! ") == "baile átha cliath");
  const std::vector<std::string> pred = {"Corcaigh.", "gaillimh", "Sligeach"};
  const std::vector<std::string> gold = {"corcaigh", "Gaillimh ", "Ciarraí"};
  CHECK(ExactMatch(pred, gold) == doctest::Approx(2.0 / 3.0));
  CHECK(ExactMatch(std::span<const std::string>{}, std::span<const std::string>{}) == 0.0);
}

TEST_CASE("length statistics bin word counts") {
  const std::vector<std::string> resp = {"a b c", "", "one two three four five six seven eight nine ten eleven"};
  const LengthStats s = ComputeLengthStats(resp, 10);
  CHECK(s.word_counts == std::vector<uint64_t>{3, 0, 11});
  CHECK(s.bins == std::vector<uint64_t>{2, 1});
  CHECK(s.total_words == 14);
  CHECK(*s.mean == doctest::Approx(14.0 / 3.0));
  CHECK_FALSE(ComputeLengthStats(std::span<const std::string>{}).mean.has_value());
}

TEST_CASE("texts load from jsonl and plain files") {
  const std::string dir = glor::testing::TempDir("texteval");
  glor::testing::WriteFile(dir + "/a.jsonl", "{\"text\":\"x y\"}\n{\"text\":\"z\"}\n");
  glor::testing::WriteFile(dir + "/b.txt", "one\n\ntwo\n");
  CHECK(LoadTexts(dir + "/a.jsonl") == std::vector<std::string>{"x y", "z"});
  CHECK(LoadTexts(dir + "/b.txt") == std::vector<std::string>{"one", "", "two"});
}

}  // namespace
}  // namespace glor::texteval
