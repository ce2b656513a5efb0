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

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "glor/core/random.h"
#include "glor/core/records.h"
#include "test_util.h"

namespace glor {
namespace {

namespace fs = std::filesystem;
using glor::testing::ReadFile;
using glor::testing::WriteFile;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result Run(const std::string& dir, const std::string& args) {
  const std::string out = dir + "/stdout.txt", err = dir + "/stderr.txt";
  const std::string cmd = std::string(GLOR_CLI) + " " + args + " > " + out + " 2> " + err;
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = ReadFile(out);
  r.err = ReadFile(err);
  return r;
}

// Every regular file under dir, relative path to bytes.
std::map<std::string, std::string> Snapshot(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = ReadFile(e.path().string());
  }
  return files;
}

std::string Words(Rng& rng, const std::vector<std::string>& vocab, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += vocab[rng.Below(vocab.size())];
  }
  return s;
}

// About 1 MB over three sources. Some Irish lines are reused inside the
// bitext so containment is non-trivial.
std::string MakeCorpus(const std::string& dir) {
  Rng rng(2024);
  std::vector<std::string> ga_vocab, en_vocab;
  const std::string letters = "abcdefghilmnorstuáéíóú";
  for (int i = 0; i < 400; ++i) {
    std::string w;
    const std::size_t len = 2 + rng.Below(7);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t at = rng.Below(22);
      w += at < 17 ? letters.substr(at, 1) : letters.substr(17 + (at - 17) * 2, 2);
    }
    ga_vocab.push_back(w);
    en_vocab.push_back("w" + std::to_string(i));
  }
  std::vector<std::string> ga_lines;
  std::string ga;
  for (int i = 0; i < 3500; ++i) {
    ga_lines.push_back(Words(rng, ga_vocab, 15 + rng.Below(20)));
    ga += ga_lines.back() + "\n";
  }
  WriteFile(dir + "/ga.txt", ga);
  std::string en;
  for (int i = 0; i < 1500; ++i) {
    en += DumpCanonical(Json{{"text", Words(rng, en_vocab, 20 + rng.Below(20))}}) + "\n";
  }
  WriteFile(dir + "/en.jsonl", en);
  std::string bitext;
  for (int i = 0; i < 800; ++i) {
    const std::string g = i % 4 == 0 ? ga_lines[rng.Below(ga_lines.size())]
                                     : Words(rng, ga_vocab, 10 + rng.Below(15));
    bitext += Words(rng, en_vocab, 10 + rng.Below(15)) + "\t" + g + "\n";
  }
  WriteFile(dir + "/bitext.tsv", bitext);
  WriteFile(dir + "/manifest.json", R"({"sources": [
  {"name": "ga-web", "path": "ga.txt", "lang": "ga"},
  {"name": "en-web", "path": "en.jsonl", "lang": "en"},
  {"name": "parallel", "path": "bitext.tsv", "lang": "bitext"}]}
)");
  return dir + "/manifest.json";
}

TEST_CASE("usage errors exit 2") {
  const std::string dir = glor::testing::TempDir("cli_usage");
  Result r = Run(dir, "ingest");
  CHECK(r.code == 2);
  CHECK(r.err.find("--manifest") != std::string::npos);
  r = Run(dir, "mix --manifest x.json --out o --bogus-flag");
  CHECK(r.code == 2);
  r = Run(dir, "nonsense");
  CHECK(r.code == 2);
  r = Run(dir, "stats mwu --x a --y b --alternative sideways");
  CHECK(r.code == 2);
}

TEST_CASE("runtime errors exit 1 with a json message") {
  const std::string dir = glor::testing::TempDir("cli_runtime");
  WriteFile(dir + "/bad.json", R"({"sources": [{"name": "a", "path": "missing.txt", "lang": "ga"}]})");
  const Result r = Run(dir, "ingest --manifest " + dir + "/bad.json --out " + dir + "/m.json");
  CHECK(r.code == 1);
  REQUIRE_FALSE(r.err.empty());
  const std::string last = r.err.substr(r.err.rfind('\n', r.err.size() - 2) + 1);
  const Json err = Json::parse(last);
  CHECK(err.contains("error"));
}

TEST_CASE("version flag") {
  const std::string dir = glor::testing::TempDir("cli_version");
  const Result r = Run(dir, "--version");
  CHECK(r.code == 0);
  CHECK(r.out.find('.') != std::string::npos);
}

TEST_CASE("mixing twice gives identical bytes including the run record") {
  const std::string dir = glor::testing::TempDir("cli_mix");
  const std::string manifest = MakeCorpus(dir);
  REQUIRE(Run(dir, "--seed 5 mix --manifest " + manifest + " --out " + dir + "/mix").code == 0);
  const auto first = Snapshot(dir + "/mix");
  CHECK(first.count("run.json") == 1);
  fs::remove_all(dir + "/mix");
  REQUIRE(Run(dir, "--seed 5 mix --manifest " + manifest + " --out " + dir + "/mix --workers 2").code == 0);
  const auto second = Snapshot(dir + "/mix");
  CHECK(first.size() == second.size());
  for (const auto& [name, bytes] : first) {
    INFO(name);
    if (name == "run.json") continue;  // records --workers
    CHECK(second.at(name) == bytes);
  }
  fs::remove_all(dir + "/mix");
  REQUIRE(Run(dir, "--seed 5 mix --manifest " + manifest + " --out " + dir + "/mix").code == 0);
  CHECK(Snapshot(dir + "/mix") == first);
  REQUIRE(Run(dir, "--seed 6 mix --manifest " + manifest + " --out " + dir + "/mix6").code == 0);
  CHECK(Snapshot(dir + "/mix6") != first);
}

TEST_CASE("end to end on a generated 1 MB corpus") {
  const std::string dir = glor::testing::TempDir("cli_e2e");
  const auto start = std::chrono::steady_clock::now();
  const std::string manifest = MakeCorpus(dir);
  std::uintmax_t bytes = 0;
  for (const char* f : {"ga.txt", "en.jsonl", "bitext.tsv"}) bytes += fs::file_size(dir + "/" + f);
  CHECK(bytes > 900'000);

  Result r = Run(dir, "ingest --manifest " + manifest + " --out " + dir + "/manifest.out.json");
  REQUIRE(r.code == 0);
  const Json m = ReadJsonFile(dir + "/manifest.out.json");
  double sum = 0;
  for (const auto& e : m["sources"]) sum += e["proportion"].get<double>();
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fs::exists(dir + "/manifest.out.json.run.json"));

  r = Run(dir, "dedup shingle --manifest " + manifest + " --out " + dir + "/shingles");
  REQUIRE(r.code == 0);
  r = Run(dir, "dedup matrix --in " + dir + "/shingles --out " + dir + "/containment.json");
  REQUIRE(r.code == 0);
  const Json c = ReadJsonFile(dir + "/containment.json");
  CHECK(c.dump().find("parallel") != std::string::npos);

  r = Run(dir, "mix --manifest " + manifest + " --out " + dir + "/mix");
  REQUIRE(r.code == 0);

  // Synthesis with the offline provider, then a cache-only re-run.
  std::string instr;
  for (int i = 0; i < 20; ++i) {
    instr += DumpCanonical(Json{{"instruction", "Describe item " + std::to_string(i)},
                                {"context", i % 2 ? "ctx" : ""},
                                {"response", "It is item " + std::to_string(i)},
                                {"category", "open_qa"},
                                {"lang", "en"}}) + "\n";
  }
  WriteFile(dir + "/instr.jsonl", instr);
  const std::string translate = "synth translate --model mock:tr --in " + dir +
                                "/instr.jsonl --out " + dir + "/ga.jsonl";
  REQUIRE(Run(dir, translate).code == 0);
  const std::string once = ReadFile(dir + "/ga.jsonl");
  const Json report = ReadJsonFile(dir + "/ga.jsonl.report.json");
  CHECK(report["report"]["output"] == 20);
  CHECK(report["client"]["network_calls"] == 20);
  REQUIRE(Run(dir, translate).code == 0);
  CHECK(ReadFile(dir + "/ga.jsonl") == once);
  CHECK(ReadJsonFile(dir + "/ga.jsonl.report.json")["client"]["network_calls"] == 0);

  r = Run(dir, "eval bleu --hyp " + dir + "/ga.txt --ref " + dir + "/ga.txt");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["score"].get<double>() == doctest::Approx(1.0));

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  MESSAGE("end-to-end seconds: " << seconds);
  CHECK(seconds < 300);
}

TEST_CASE("stats commands read plain files") {
  const std::string dir = glor::testing::TempDir("cli_stats");
  WriteFile(dir + "/x.txt", "5\n7\n");
  WriteFile(dir + "/y.txt", "1\n2\n3\n");
  Result r = Run(dir, "stats mwu --x " + dir + "/x.txt --y " + dir + "/y.txt");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["p"].get<double>() == doctest::Approx(0.1));
  CHECK(j.contains("run"));

  WriteFile(dir + "/a.txt", "A\nA\nB\nB\n");
  WriteFile(dir + "/b.txt", "A\nB\nB\nB\n");
  r = Run(dir, "stats kappa --a " + dir + "/a.txt --b " + dir + "/b.txt");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["kappa"].get<double>() == doctest::Approx(0.5));

  WriteFile(dir + "/wins.json",
            R"({"models": ["a", "b"], "wins": [[0, 3], [1, 0]]})");
  r = Run(dir, "stats bt --in " + dir + "/wins.json");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["ranking"][0] == "a");
}

}  // namespace
}  // namespace glor
