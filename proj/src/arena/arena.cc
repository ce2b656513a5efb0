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

#include "glor/arena/arena.h"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/random.h"

namespace glor::arena {
namespace {

constexpr std::string_view kGenerationQuestion =
    "Which Question–Answer pair exhibits a stronger command of Irish grammar and semantic "
    "coherence? Take the use of the reference text into account. If unsure, pick the one with "
    "a stronger display of Irish grammar. Choose A or B.";
constexpr std::string_view kPreferenceQuestion =
    "Given the prompt, which response is the better Irish reply? Choose A or B.";

char AsciiLower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = AsciiLower(c);
  return out;
}

// Seeds of `pool` that have at least one generation, in a seeded order.
std::vector<const SeedText*> GeneratedSeeds(std::span<const SeedText> pool,
                                            const std::set<std::string>& generated,
                                            uint64_t seed, std::string_view label) {
  std::vector<const SeedText*> out;
  for (const SeedText& s : pool) {
    if (generated.count(s.id)) out.push_back(&s);
  }
  if (out.empty()) {
    throw UsageError("seed pool '" + std::string(label) + "' has no seeds with generations");
  }
  Rng rng(DeriveSeed(seed, "arena:pool:" + std::string(label)));
  rng.Shuffle(std::span<const SeedText*>(out));
  return out;
}

Json GenerationPayload(const QAPair& qa, std::span<const std::string> names) {
  Json j;
  j["question"] = RedactNames(qa.question_ga, names);
  j["answer"] = RedactNames(qa.answer_ga, names);
  return j;
}

void CollectStrings(const Json& j, std::vector<std::string>& out) {
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_structured()) {
    for (const auto& v : j) CollectStrings(v, out);
  }
}

}  // namespace

std::string_view ModeName(Mode mode) {
  return mode == Mode::kGeneration ? "generation-arena" : "preference-validation";
}

Mode ParseMode(std::string_view name) {
  if (name == "generation-arena") return Mode::kGeneration;
  if (name == "preference-validation") return Mode::kPreferenceValidation;
  throw UsageError("unknown arena mode '" + std::string(name) + "'");
}

std::string_view QuestionFor(Mode mode) {
  return mode == Mode::kGeneration ? kGenerationQuestion : kPreferenceQuestion;
}

Json Comparison::ToJson() const {
  Json j;
  j["key"] = key;
  j["mode"] = ModeName(mode);
  j["seed_ref"] = seed_ref;
  j["context"] = context;
  j["model_a"] = model_a;
  j["model_b"] = model_b;
  j["display_swap"] = display_swap;
  if (mode == Mode::kPreferenceValidation) j["intended"] = intended;
  j["payload_a"] = payload_a;
  j["payload_b"] = payload_b;
  return j;
}

Comparison Comparison::FromJson(const Json& j, std::size_t line) {
  if (!j.is_object()) throw ValidationError(line, "", "comparison must be an object");
  Comparison c;
  c.key = field::String(j, "key", line, true);
  const std::string mode = field::String(j, "mode", line, true);
  try {
    c.mode = ParseMode(mode);
  } catch (const UsageError& e) {
    throw ValidationError(line, "mode", e.what());
  }
  c.seed_ref = field::String(j, "seed_ref", line, true);
  c.context = field::OptionalString(j, "context", line);
  c.model_a = field::String(j, "model_a", line, true);
  c.model_b = field::String(j, "model_b", line, true);
  c.display_swap = field::Bool(j, "display_swap", line);
  c.intended = field::OptionalString(j, "intended", line);
  c.payload_a = field::Require(j, "payload_a", line);
  c.payload_b = field::Require(j, "payload_b", line);
  if (!(c.model_a < c.model_b)) {
    throw ValidationError(line, "model_a", "model_a must sort before model_b");
  }
  if (!c.payload_a.is_object() || !c.payload_b.is_object()) {
    throw ValidationError(line, "payload_a", "payloads must be objects");
  }
  return c;
}

Json Comparison::AnnotatorView() const {
  Json j;
  j["key"] = key;
  j["mode"] = ModeName(mode);
  j["context"] = context;
  j["question"] = QuestionFor(mode);
  j["a"] = display_swap ? payload_b : payload_a;
  j["b"] = display_swap ? payload_a : payload_b;
  return j;
}

const std::string& Comparison::Resolve(stats::Choice choice) const {
  const bool first = (choice == stats::Choice::kA) != display_swap;
  return first ? model_a : model_b;
}

std::string ComparisonKey(Mode mode, std::string_view model_a, std::string_view model_b,
                          std::string_view seed_ref, int occurrence) {
  std::string ref(seed_ref);
  if (occurrence > 0) ref += "#" + std::to_string(occurrence);
  return StableKey({std::string(ModeName(mode)), std::string(model_a), std::string(model_b), ref});
}

std::string RedactNames(std::string_view text, std::span<const std::string> names) {
  std::string out(text);
  for (const std::string& name : names) {
    if (name.empty()) continue;
    const std::string needle = AsciiLower(name);
    std::string lower = AsciiLower(out);
    for (std::size_t at = lower.find(needle); at != std::string::npos;
         at = lower.find(needle, at + 7)) {
      out.replace(at, needle.size(), "[model]");
      lower.replace(at, needle.size(), "[model]");
    }
  }
  return out;
}

std::vector<std::string> FindNameLeaks(std::span<const Comparison> comparisons,
                                       std::span<const std::string> names) {
  std::vector<std::string> leaks;
  for (const Comparison& c : comparisons) {
    std::vector<std::string> visible;
    CollectStrings(c.AnnotatorView(), visible);
    for (const std::string& text : visible) {
      const std::string lower = AsciiLower(text);
      for (const std::string& name : names) {
        if (!name.empty() && lower.find(AsciiLower(name)) != std::string::npos) {
          leaks.push_back(c.key + ": '" + name + "'");
        }
      }
    }
  }
  return leaks;
}

std::vector<Comparison> SchedulePairs(std::span<const std::string> models,
                                      std::span<const SeedText> pool_a,
                                      std::span<const SeedText> pool_b,
                                      std::span<const QAPair> generations,
                                      const ScheduleOptions& options) {
  std::vector<std::string> sorted(models.begin(), models.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 2) throw UsageError("an arena needs at least two distinct models");
  if (options.per_pair < 1) throw UsageError("per_pair must be at least 1");
  if (pool_a.empty() || pool_b.empty()) throw UsageError("both seed pools must be non-empty");

  std::map<std::pair<std::string, std::string>, const QAPair*> by_model_seed;
  std::set<std::string> generated;
  for (const QAPair& qa : generations) {
    by_model_seed.emplace(std::make_pair(qa.model, qa.seed_ref), &qa);
    generated.insert(qa.seed_ref);
  }

  const std::vector<const SeedText*> order_a =
      GeneratedSeeds(pool_a, generated, options.seed, pool_a.front().pool + "/a");
  const std::vector<const SeedText*> order_b =
      GeneratedSeeds(pool_b, generated, options.seed, pool_b.front().pool + "/b");
  const std::vector<const SeedText*>* orders[2] = {&order_a, &order_b};
  std::size_t cursor[2] = {0, 0};

  struct Slot {
    std::size_t i, j;
    const SeedText* seed;
  };
  std::vector<Slot> slots;
  std::size_t index = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      for (int t = 0; t < options.per_pair; ++t, ++index) {
        const int pool = static_cast<int>(index % 2);
        const auto& order = *orders[pool];
        slots.push_back({i, j, order[cursor[pool]++ % order.size()]});
      }
    }
  }
  for (int pool = 0; pool < 2; ++pool) {
    if (cursor[pool] > orders[pool]->size()) {
      std::cerr << "warning: seed pool '" << (pool == 0 ? pool_a : pool_b).front().pool
                << "' has " << orders[pool]->size() << " generated seeds for " << cursor[pool]
                << " comparisons; reusing seeds round-robin\n";
    }
  }

  std::set<std::string> gaps;
  for (const Slot& s : slots) {
    for (std::size_t m : {s.i, s.j}) {
      if (!by_model_seed.count({sorted[m], s.seed->id})) {
        gaps.insert("(" + sorted[m] + ", " + s.seed->id + ")");
      }
    }
  }
  if (!gaps.empty()) {
    std::string msg = "missing generations for " + std::to_string(gaps.size()) + " (model, seed):";
    for (const std::string& g : gaps) msg += " " + g;
    throw NotFoundError(msg);
  }

  Rng coin(DeriveSeed(options.seed, "arena:swap"));
  std::map<std::tuple<std::size_t, std::size_t, std::string>, int> seen;
  std::vector<Comparison> out;
  out.reserve(slots.size());
  for (const Slot& s : slots) {
    Comparison c;
    c.mode = Mode::kGeneration;
    c.model_a = sorted[s.i];
    c.model_b = sorted[s.j];
    c.seed_ref = s.seed->id;
    c.context = RedactNames(s.seed->text, sorted);
    const int occurrence = seen[{s.i, s.j, s.seed->id}]++;
    c.key = ComparisonKey(c.mode, c.model_a, c.model_b, c.seed_ref, occurrence);
    c.display_swap = coin.Coin();
    c.payload_a = GenerationPayload(*by_model_seed.at({c.model_a, c.seed_ref}), sorted);
    c.payload_b = GenerationPayload(*by_model_seed.at({c.model_b, c.seed_ref}), sorted);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Comparison> BuildPreferenceValidation(std::span<const PreferencePair> pairs,
                                                  std::size_t sample_n, uint64_t seed) {
  if (sample_n > pairs.size()) {
    throw UsageError("sample of " + std::to_string(sample_n) + " exceeds the " +
                     std::to_string(pairs.size()) + " available preference pairs");
  }
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng pick(DeriveSeed(seed, "prefval:sample"));
  pick.Shuffle(std::span<std::size_t>(order));
  order.resize(sample_n);

  Rng coin(DeriveSeed(seed, "prefval:swap"));
  std::map<std::string, int> seen;
  std::vector<Comparison> out;
  out.reserve(sample_n);
  for (std::size_t idx : order) {
    const PreferencePair& p = pairs[idx];
    Comparison c;
    c.mode = Mode::kPreferenceValidation;
    c.model_a = std::string(kAccepted);
    c.model_b = std::string(kRejected);
    c.seed_ref = p.source_id.empty() ? "pair-" + std::to_string(idx) : p.source_id;
    c.context = p.prompt_ga;
    c.intended = p.intended;
    c.key = ComparisonKey(c.mode, c.model_a, c.model_b, c.seed_ref, seen[c.seed_ref]++);
    c.display_swap = coin.Coin();
    c.payload_a = Json{{"response", p.accepted_ga}};
    c.payload_b = Json{{"response", p.rejected_ga}};
    out.push_back(std::move(c));
  }
  return out;
}

void WriteComparisons(const std::string& path, std::span<const Comparison> comparisons) {
  JsonLinesWriter writer(path);
  for (const Comparison& c : comparisons) writer.Write(c.ToJson());
  writer.Close();
}

std::vector<Comparison> ReadComparisons(const std::string& path) {
  std::vector<Comparison> out;
  std::set<std::string> keys;
  JsonLinesReader reader(path);
  while (auto j = reader.Next()) {
    Comparison c = Comparison::FromJson(*j, reader.line());
    if (!keys.insert(c.key).second) {
      throw ValidationError(reader.line(), "key", "duplicate comparison key " + c.key);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace glor::arena
