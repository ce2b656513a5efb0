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
#include "glor/core/errors.h"
#include "glor/core/random.h"
#include "glor/dedup/containment.h"
#include "oracles.h"
#include "test_util.h"

namespace glor::dedup {
namespace {

ShingleSet FromText(std::string_view text, int width, std::string owner = "x") {
  return Shingle(Normalize(text), width, std::move(owner));
}

using glor::testing::OracleGrams;

TEST_CASE("normalization lower-cases and drops punctuation and symbols") {
  CHECK(Normalize("Dáil ÉIREANN!") == std::vector<std::string>{"dáil", "éireann"});
  CHECK(Normalize("¿Qué tal? 5€ \u2014 ok") == std::vector<std::string>{"qué", "tal", "5", "ok"});
  CHECK(Normalize("An tUachtarán, a dúirt sé: \"Fáilte\"!") ==
        std::vector<std::string>{"an", "tuachtarán", "a", "dúirt", "sé", "fáilte"});
  CHECK(Normalize("Σίσυφος + 3 = ΛΌΓΟΙ") == std::vector<std::string>{"σίσυφος", "3", "λόγοι"});
  CHECK(Normalize("a b　c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(Normalize("it's") == std::vector<std::string>{"its"});
}

TEST_CASE("containment of identical, disjoint and hand-enumerated sets") {
  const auto a = FromText("the cat sat on the mat today", 5);
  CHECK(Containment(a, a).containment == 1.0);
  const auto d = FromText("one two three four five six", 5);
  CHECK(Containment(a, d).containment == 0.0);
  // 2-shingles: A = {"a b", "b c"}, B = {"a b", "b d"}.
  const auto x = FromText("a b c", 2);
  const auto y = FromText("a b d", 2);
  const auto r = Containment(x, y);
  CHECK(r.a_size == 2);
  CHECK(r.intersection == 1);
  CHECK(r.containment == 0.5);
  // Containment is asymmetric.
  const auto big = FromText("a b c d e f", 2);
  CHECK(Containment(x, big).containment == 1.0);
  CHECK(Containment(big, x).containment == doctest::Approx(0.4));
}

TEST_CASE("empty and short inputs") {
  const auto e = FromText("too short", 5);
  CHECK(e.empty());
  const auto r = Containment(e, FromText("a b c d e f", 5));
  CHECK(r.empty_a);
  CHECK(r.containment == 0.0);
  CHECK_THROWS_AS(Shingle(Normalize("a b"), 0), UsageError);
  CHECK_THROWS_AS(Containment(FromText("a b c", 2), FromText("a b c", 3)), UsageError);
}

TEST_CASE("shingle sets are sorted, unique and order-independent") {
  const auto s = FromText("a b a b a b a b", 2);
  CHECK(std::is_sorted(s.hashes.begin(), s.hashes.end()));
  CHECK(s.size() == 2);
  ShingleAccumulator acc("src", 2);
  acc.AddText("c d e");
  acc.AddText("a b c");
  ShingleAccumulator acc2("src", 2);
  acc2.AddText("a b c");
  acc2.AddText("c d e");
  CHECK(acc.Finish().hashes == acc2.Finish().hashes);
}

TEST_CASE("shingle file round trip") {
  const std::string dir = testing::TempDir("shfile");
  const auto s = FromText("the quick brown fox jumps over the lazy dog again", 5, "src");
  WriteShingleFile(dir + "/s.shingles", s);
  const auto back = ReadShingleFile(dir + "/s.shingles");
  CHECK(back.owner == "src");
  CHECK(back.width == 5);
  CHECK(back.hashes == s.hashes);
  testing::WriteFile(dir + "/bad.shingles", "nope");
  CHECK_THROWS(ReadShingleFile(dir + "/bad.shingles"));
}

TEST_CASE("hash-based matrix equals a string n-gram oracle on 5 sources") {
  const std::string dir = testing::TempDir("matrix");
  Rng rng(11);
  const std::vector<std::string> vocab = {"an", "teach", "mór", "bád", "cat", "madra", "lá",
                                          "oíche", "scoil", "obair", "the", "house", "is",
                                          "big", "boat", "dog", "day", "night"};
  // A shared passage planted in some sources creates real overlap.
  std::string shared;
  for (int i = 0; i < 40; ++i) shared += vocab[rng.Below(vocab.size())] + " ";
  std::map<std::string, std::vector<std::string>> docs;
  std::string manifest = R"({"sources":[)";
  for (int s = 0; s < 5; ++s) {
    const std::string name = "src" + std::to_string(s);
    std::string content;
    for (int d = 0; d < 30; ++d) {
      std::string doc;
      const int len = 3 + static_cast<int>(rng.Below(30));
      for (int w = 0; w < len; ++w) {
        doc += vocab[rng.Below(vocab.size())];
        doc += rng.Below(8) == 0 ? ", " : " ";
      }
      if (s % 2 == 0 && d % 10 == 0) doc += shared;
      docs[name].push_back(doc);
      content += doc + "\n";
    }
    testing::WriteFile(dir + "/" + name + ".txt", content);
    manifest += std::string(s ? "," : "") + R"({"name":")" + name + R"(","path":")" + name +
                R"(.txt","lang":"ga"})";
  }
  manifest += "]}";
  testing::WriteFile(dir + "/m.json", manifest);

  for (int workers : {1, 3}) {
    const std::string out = dir + "/sh" + std::to_string(workers);
    ShingleManifest(dir + "/m.json", 5, out, workers);
    const auto reports = ContainmentMatrix(out);
    CHECK(reports.size() == 20);
    for (const auto& r : reports) {
      const auto ga = OracleGrams(docs[r.a], 5);
      const auto gb = OracleGrams(docs[r.b], 5);
      std::size_t inter = 0;
      for (const auto& g : ga) inter += gb.count(g);
      CHECK(r.a_size == ga.size());
      CHECK(r.intersection == inter);
      CHECK(r.containment == static_cast<double>(inter) / static_cast<double>(ga.size()));
    }
  }
  const std::vector<std::string> unknown = {"src0", "nope"};
  CHECK_THROWS_AS(ContainmentMatrix(dir + "/sh1", unknown), UsageError);
}

}  // namespace
}  // namespace glor::dedup
