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
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "glor/annostore/server.h"
#include "glor/annostore/store.h"
#include "glor/core/errors.h"
#include "httplib.h"
#include "test_util.h"

namespace glor::annostore {
namespace {

using stats::Choice;

const std::vector<std::string> kModels = {"gpt-5", "claude-4-sonnet", "gemini-2.5-pro",
                                          "llama-3.1-70b", "gpt-4o", "mistral-large"};

std::vector<arena::Comparison> Comparisons() {
  std::vector<SeedText> a, b;
  for (int i = 0; i < 30; ++i) {
    a.push_back({"wiki:" + std::to_string(i), "wiki", "wiki seed " + std::to_string(i)});
    b.push_back({"news:" + std::to_string(i), "news", "news seed " + std::to_string(i)});
  }
  std::vector<QAPair> gens;
  for (const auto& m : kModels) {
    for (const auto* pool : {&a, &b}) {
      for (const auto& s : *pool) gens.push_back({s.id, m, "q " + s.id, "answer " + s.id});
    }
  }
  return arena::SchedulePairs(kModels, a, b, gens, {8, 42});
}

std::vector<arena::Comparison> WithPreference() {
  auto cs = Comparisons();
  std::vector<PreferencePair> pairs;
  for (int i = 0; i < 10; ++i) {
    pairs.push_back({"p" + std::to_string(i), "good", "bad", "pp-" + std::to_string(i), "accepted"});
  }
  for (auto& c : arena::BuildPreferenceValidation(pairs, 10, 5)) cs.push_back(std::move(c));
  return cs;
}

std::string FixedClock() { return "2026-01-01T00:00:00Z"; }

Choice Pick(const std::string& key) { return (key.back() % 2) ? Choice::kA : Choice::kB; }

TEST_CASE("roles are validated") {
  CHECK_NOTHROW(ValidateRole("native"));
  CHECK_NOTHROW(ValidateRole("learner"));
  CHECK_NOTHROW(ValidateRole("llm-judge:gpt-5"));
  CHECK_THROWS_AS(ValidateRole("llm-judge:"), UsageError);
  CHECK_THROWS_AS(ValidateRole("expert"), UsageError);
}

TEST_CASE("next is idempotent and 120 answers finish the set") {
  const std::string dir = glor::testing::TempDir("anno_next");
  Store store(Comparisons(), dir + "/ledger.jsonl", 1, FixedClock);
  store.Register("ann1", "native");
  CHECK_THROWS_AS(store.Next("nobody"), NotFoundError);
  const auto first = store.Next("ann1");
  REQUIRE(first);
  CHECK(store.Next("ann1")->key == first->key);
  std::set<std::string> seen;
  for (int i = 0; i < 120; ++i) {
    const auto next = store.Next("ann1");
    REQUIRE(next);
    CHECK(seen.insert(next->key).second);
    store.Submit("ann1", next->key, Pick(next->key));
  }
  CHECK_FALSE(store.Next("ann1").has_value());
  const Progress p = store.ProgressFor("ann1");
  CHECK(p.answered == 120);
  CHECK(p.total == 120);
}

TEST_CASE("annotators see the same key set in different orders") {
  const std::string dir = glor::testing::TempDir("anno_order");
  Store store(Comparisons(), dir + "/ledger.jsonl", 1, FixedClock);
  store.Register("alice", "native");
  store.Register("bob", "learner");
  auto a = store.OrderFor("alice"), b = store.OrderFor("bob");
  CHECK(a != b);
  CHECK(store.OrderFor("alice") == a);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK(a.size() == 120);
}

TEST_CASE("submission outcomes") {
  const std::string dir = glor::testing::TempDir("anno_submit");
  const auto cs = Comparisons();
  Store store(cs, dir + "/ledger.jsonl", 1, FixedClock);
  store.Register("ann", "learner");
  const std::string key = cs[0].key;
  // new, repeat, contradiction, unknown key.
  const SubmitResult fresh = store.Submit("ann", key, Choice::kA);
  CHECK_FALSE(fresh.duplicate);
  CHECK(fresh.annotation.resolved_choice == cs[0].Resolve(Choice::kA));
  CHECK(fresh.annotation.timestamp == "2026-01-01T00:00:00Z");
  const SubmitResult again = store.Submit("ann", key, Choice::kA);
  CHECK(again.duplicate);
  CHECK_THROWS_AS(store.Submit("ann", key, Choice::kB), ConflictError);
  CHECK_THROWS_AS(store.Submit("ann", "0000000000000000", Choice::kA), NotFoundError);
  CHECK_THROWS_AS(store.Submit("stranger", key, Choice::kA), NotFoundError);

  // Exactly one ledger line for the annotation.
  const std::string ledger = glor::testing::ReadFile(dir + "/ledger.jsonl");
  std::size_t annotation_lines = 0, pos = 0;
  while ((pos = ledger.find("\"annotation\"", pos)) != std::string::npos) {
    ++annotation_lines;
    ++pos;
  }
  CHECK(annotation_lines == 1);

  CHECK_NOTHROW(store.Register("ann", "learner"));
  CHECK_THROWS_AS(store.Register("ann", "native"), ConflictError);
}

TEST_CASE("skipped items leave the queue but not the export") {
  const std::string dir = glor::testing::TempDir("anno_skip");
  Store store(Comparisons(), dir + "/ledger.jsonl", 1, FixedClock);
  store.Register("ann", "native");
  const auto first = store.Next("ann");
  store.Skip("ann", first->key);
  CHECK(store.Next("ann")->key != first->key);
  CHECK(store.ProgressFor("ann").skipped == 1);
  CHECK(store.Export().annotations.empty());
  const auto second = store.Next("ann");
  store.Submit("ann", second->key, Choice::kA);
  CHECK_THROWS_AS(store.Skip("ann", second->key), ConflictError);
}

TEST_CASE("a crashed process loses no acknowledged annotation") {
  const std::string dir = glor::testing::TempDir("anno_crash");
  const auto cs = Comparisons();
  const pid_t pid = fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    Store store(cs, dir + "/ledger.jsonl", 1, FixedClock);
    store.Register("ann", "native");
    for (int i = 0; i < 17; ++i) {
      const auto next = store.Next("ann");
      store.Submit("ann", next->key, Pick(next->key));
    }
    _exit(0);  // no destructors, no flush at exit
  }
  int status = 0;
  waitpid(pid, &status, 0);
  REQUIRE(WIFEXITED(status));
  Store reopened(cs, dir + "/ledger.jsonl", 1, FixedClock);
  CHECK(reopened.IsRegistered("ann"));
  CHECK(reopened.ProgressFor("ann").answered == 17);
  CHECK(reopened.Export().annotations.size() == 17);
}

TEST_CASE("ledger replay handles torn and unterminated tails") {
  const std::string dir = glor::testing::TempDir("anno_torn");
  const std::string path = dir + "/ledger.jsonl";
  const auto cs = Comparisons();
  {
    Store store(cs, path, 1, FixedClock);
    store.Register("ann", "native");
    store.Submit("ann", cs[0].key, Choice::kA);
    store.Submit("ann", cs[1].key, Choice::kB);
  }
  const std::string clean = glor::testing::ReadFile(path);

  glor::testing::WriteFile(path, clean + "{\"type\":\"annotation\",\"comparison_k");
  {
    Store store(cs, path, 1, FixedClock);
    CHECK(store.ProgressFor("ann").answered == 2);
  }
  CHECK(glor::testing::ReadFile(path) == clean);

  glor::testing::WriteFile(path, clean.substr(0, clean.size() - 1));
  {
    Store store(cs, path, 1, FixedClock);
    CHECK(store.ProgressFor("ann").answered == 2);
    store.Submit("ann", cs[2].key, Choice::kA);
  }
  {
    Store store(cs, path, 1, FixedClock);
    CHECK(store.ProgressFor("ann").answered == 3);
  }

  const std::string good = glor::testing::ReadFile(path);
  glor::testing::WriteFile(path, "not json\n" + good);
  CHECK_THROWS_AS(Store(cs, path, 1, FixedClock), ValidationError);
}

TEST_CASE("exports filter by role and mode and count resolved wins") {
  const std::string dir = glor::testing::TempDir("anno_export");
  const auto cs = WithPreference();
  Store store(cs, dir + "/ledger.jsonl", 3, FixedClock);
  {
    const ExportResult empty = store.Export();
    CHECK(empty.annotations.empty());
    CHECK(empty.matrix.Total() == 0);
  }
  for (const std::string who : {"nat", "judge-a", "judge-b"}) {
    store.Register(who, who == "nat" ? "native" : "llm-judge:" + who);
    while (auto next = store.Next(who)) store.Submit(who, next->key, Pick(next->key + who));
  }
  ExportFilter gen_native{"native", arena::Mode::kGeneration};
  const ExportResult native = store.Export(gen_native);
  CHECK(native.annotations.size() == 120);
  CHECK(native.matrix.Total() == 120);
  CHECK(native.matrix.models.size() == 6);

  // Independent tally from the annotations themselves.
  std::map<std::string, const arena::Comparison*> by_key;
  for (const auto& c : cs) by_key[c.key] = &c;
  std::map<std::pair<std::string, std::string>, uint64_t> tally;
  for (const Annotation& a : native.annotations) {
    const auto* c = by_key.at(a.comparison_key);
    const std::string& loser = a.resolved_choice == c->model_a ? c->model_b : c->model_a;
    ++tally[{a.resolved_choice, loser}];
  }
  for (std::size_t i = 0; i < native.matrix.size(); ++i) {
    for (std::size_t j = 0; j < native.matrix.size(); ++j) {
      const auto it = tally.find({native.matrix.models[i], native.matrix.models[j]});
      CHECK(native.matrix.wins[i][j] == (it == tally.end() ? 0 : it->second));
    }
  }

  CHECK(store.Export(ExportFilter{"llm-judge", std::nullopt}).annotations.size() == 260);
  CHECK(store.Export(ExportFilter{"llm-judge:judge-a", std::nullopt}).annotations.size() == 130);
  const ExportResult pref =
      store.Export(ExportFilter{"", arena::Mode::kPreferenceValidation});
  CHECK(pref.annotations.size() == 30);
  CHECK(pref.matrix.models ==
        std::vector<std::string>{std::string(arena::kAccepted), std::string(arena::kRejected)});

  // A replayed store exports the same bytes.
  Store replay(cs, dir + "/ledger.jsonl", 3, FixedClock);
  CHECK(replay.Export().ToJson().dump() == store.Export().ToJson().dump());
  CHECK(store.Export().ToJson()["total"] == 390);
}

class Running {
 public:
  Running(Store& store, ServerOptions opts) : server_(store, std::move(opts)) {
    port_ = server_.Bind();
    thread_ = std::thread([this] { server_.Run(); });
  }
  ~Running() {
    server_.Stop();
    thread_.join();
  }
  int port() const { return port_; }

 private:
  Server server_;
  int port_;
  std::thread thread_;
};

TEST_CASE("HTTP API end to end") {
  const std::string dir = glor::testing::TempDir("anno_http");
  Store store(Comparisons(), dir + "/ledger.jsonl", 1, FixedClock);
  Running running(store, {"127.0.0.1", 0, ""});
  httplib::Client cli("127.0.0.1", running.port());
  cli.set_read_timeout(10);

  auto post = [&](const std::string& path, const Json& body) {
    return cli.Post(path, body.dump(), "application/json");
  };
  auto r = post("/api/register", {{"annotator", "web"}, {"role", "native"}});
  REQUIRE(r);
  CHECK(r->status == 200);

  r = cli.Get("/api/next?annotator=web");
  REQUIRE(r);
  CHECK(r->status == 200);
  Json body = Json::parse(r->body);
  CHECK(body["done"] == false);
  CHECK_FALSE(body["comparison"].contains("model_a"));
  CHECK(r->body.find("gpt-5") == std::string::npos);
  const std::string key = body["comparison"]["key"];

  r = post("/api/submit", {{"annotator", "web"}, {"key", key}, {"choice", "A"}});
  CHECK(r->status == 200);
  CHECK(Json::parse(r->body)["duplicate"] == false);
  r = post("/api/submit", {{"annotator", "web"}, {"key", key}, {"choice", "A"}});
  CHECK(Json::parse(r->body)["duplicate"] == true);
  r = post("/api/submit", {{"annotator", "web"}, {"key", key}, {"choice", "B"}});
  CHECK(r->status == 409);
  CHECK(Json::parse(r->body).contains("error"));
  r = post("/api/submit", {{"annotator", "web"}, {"key", "ffffffffffffffff"}, {"choice", "A"}});
  CHECK(r->status == 404);
  r = cli.Post("/api/submit", "{broken", "application/json");
  CHECK(r->status == 400);
  r = cli.Get("/api/next");
  CHECK(r->status == 400);

  r = cli.Get("/api/progress?annotator=web");
  CHECK(Json::parse(r->body)["answered"] == 1);
  r = cli.Get("/api/export?role=native&mode=generation-arena");
  CHECK(r->status == 200);
  CHECK(Json::parse(r->body)["total"] == 1);
  r = cli.Get("/api/export?mode=bogus");
  CHECK(r->status == 400);

  r = cli.Get("/");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body.find("/api/next") != std::string::npos);
}

TEST_CASE("a static bundle is served at the root") {
  const std::string dir = glor::testing::TempDir("anno_static");
  std::filesystem::create_directories(dir + "/ui");
  glor::testing::WriteFile(dir + "/ui/index.html", "<html>annotator bundle</html>");
  Store store(Comparisons(), dir + "/ledger.jsonl", 1, FixedClock);
  Running running(store, {"127.0.0.1", 0, dir + "/ui"});
  httplib::Client cli("127.0.0.1", running.port());
  auto r = cli.Get("/");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body == "<html>annotator bundle</html>");
  r = cli.Get("/api/progress?annotator=nobody");
  CHECK(r->status == 404);
}

}  // namespace
}  // namespace glor::annostore
