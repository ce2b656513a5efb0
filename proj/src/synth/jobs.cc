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

#include "glor/synth/jobs.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/random.h"

namespace glor::synth {
namespace {

constexpr std::string_view kPayloadSlot = "{{payload}}";

constexpr const char* kGenerateSystem =
    "You write Irish (Gaeilge) reading-comprehension material. You answer only in Irish.";
constexpr const char* kGenerateUser =
    "Read the text below. Write one question in Irish that can be answered from the text, "
    "and its answer in Irish, using the text as the reference.\n"
    "Reply with a single fenced json block containing exactly the string fields "
    "\"question\" and \"answer\".\n\n{{payload}}\n";

constexpr const char* kTranslateSystem =
    "You translate English instruction data into natural Irish (Gaeilge).";
constexpr const char* kTranslateUser =
    "Translate each field of the record below into Irish. Keep the meaning and the format. "
    "A field that is empty in the input must be empty in the output.\n"
    "Reply with a single fenced json block containing exactly the string fields "
    "\"instruction\", \"context\" and \"response\".\n\n{{payload}}\n";

constexpr const char* kPreferenceSystem =
    "You produce Irish (Gaeilge) translations of assistant conversations at two quality levels.";
constexpr const char* kPreferenceUser =
    "Translate the prompt below into Irish. Then give two Irish versions of the response. "
    "response_1 reads as if an Irish speaker wrote it: fluent, idiomatic and faithful. "
    "response_2 is a poor rendering: word-for-word, clumsy, with grammatical slips, partly "
    "wrong and less helpful. The two responses must differ.\n"
    "Reply with a single fenced json block containing exactly the string fields "
    "\"prompt\", \"response_1\" and \"response_2\".\n\n{{payload}}\n";

std::string RepairNote(std::span<const std::string_view> fields) {
  std::string note =
      "\n\nThe previous reply could not be used. Reply again with only a json object in a "
      "fenced block, with these string fields:";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    note += (i == 0 ? " \"" : ", \"") + std::string(fields[i]) + "\"";
  }
  return note + ".\n";
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read prompt template " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string Trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double DefaultTemperature(JobKind kind) { return kind == JobKind::kGenerate ? 0.7 : 0.0; }

GenRequest BaseRequest(const JobConfig& config, const ModelRef& model, JobKind kind,
                       const PromptTemplate& prompt) {
  GenRequest req;
  req.provider = model.provider;
  req.model = model.name;
  req.system = prompt.system;
  req.temperature = config.temperature.value_or(DefaultTemperature(kind));
  req.max_tokens = config.max_tokens;
  req.key_ref = config.key_ref;
  req.template_version = prompt.Version();
  req.Validate();
  return req;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Results are stored by
// index, so output order never depends on scheduling.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

enum class Outcome { kOk, kUnparseable, kRejected, kFailed };

struct Attempt {
  Outcome outcome = Outcome::kFailed;
  Json value;
  bool repaired = false;
  std::string error;
};

// One request plus at most one repair request. `check` returns an empty
// string when the parsed object is acceptable, otherwise the reason.
template <typename Check>
Attempt RequestStructured(CompletionClient& client, GenRequest req,
                          std::span<const std::string_view> fields,
                          std::span<const std::string_view> may_be_empty, Check check) {
  Attempt a;
  const std::string user = req.user;
  for (int round = 0; round < 2; ++round) {
    if (round == 1) {
      req.user = user + RepairNote(fields);
      a.repaired = true;
    }
    Completion c;
    try {
      c = client.Complete(req);
    } catch (const std::exception& e) {
      a.outcome = Outcome::kFailed;
      a.error = e.what();
      return a;
    }
    auto parsed = ParseStructured(c.text, fields, may_be_empty);
    if (!parsed) {
      a.outcome = Outcome::kUnparseable;
      a.error = "reply does not match the expected fields";
      continue;
    }
    if (std::string why = check(*parsed); !why.empty()) {
      a.outcome = Outcome::kRejected;
      a.error = why;
      continue;
    }
    a.outcome = Outcome::kOk;
    a.value = std::move(*parsed);
    a.error.clear();
    return a;
  }
  return a;
}

}  // namespace

std::string_view JobName(JobKind kind) {
  switch (kind) {
    case JobKind::kGenerate:
      return "generate";
    case JobKind::kTranslate:
      return "translate";
    case JobKind::kPreference:
      return "preference";
  }
  return "?";
}

std::string PromptTemplate::Version() const { return StableKey({"prompt", system, user}); }

std::string PromptTemplate::Render(const Json& payload) const {
  const auto at = user.find(kPayloadSlot);
  if (at == std::string::npos) throw UsageError("prompt template lacks {{payload}}");
  std::string out = user;
  out.replace(at, kPayloadSlot.size(), "```json\n" + payload.dump(2) + "\n```");
  return out;
}

PromptTemplate PromptTemplate::Builtin(JobKind kind) {
  switch (kind) {
    case JobKind::kGenerate:
      return {kGenerateSystem, kGenerateUser};
    case JobKind::kTranslate:
      return {kTranslateSystem, kTranslateUser};
    case JobKind::kPreference:
      return {kPreferenceSystem, kPreferenceUser};
  }
  throw UsageError("unknown job kind");
}

PromptTemplate PromptTemplate::Load(const std::string& dir, JobKind kind) {
  const std::string base = dir + "/" + std::string(JobName(kind));
  PromptTemplate t{ReadText(base + ".system.txt"), ReadText(base + ".user.txt")};
  if (t.user.find(kPayloadSlot) == std::string::npos) {
    throw UsageError(base + ".user.txt lacks {{payload}}");
  }
  return t;
}

ModelRef ModelRef::Parse(std::string_view spec) {
  ModelRef m;
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    m.name = std::string(spec);
  } else {
    m.provider = ParseProvider(spec.substr(0, colon));
    m.name = std::string(spec.substr(colon + 1));
  }
  if (m.name.empty()) throw UsageError("empty model name in '" + std::string(spec) + "'");
  return m;
}

std::string ModelRef::ToString() const {
  return std::string(ProviderName(provider)) + ":" + name;
}

Json JobReport::ToJson() const {
  Json j;
  j["job"] = job;
  j["input"] = input;
  j["output"] = output;
  j["retried"] = retried;
  j["dropped"] = dropped;
  j["repairs"] = repairs;
  j["shortfall"] = shortfall();
  j["conserved"] = Conserved();
  j["log"] = log;
  return j;
}

std::optional<Json> ParseStructured(std::string_view reply,
                                    std::span<const std::string_view> required,
                                    std::span<const std::string_view> may_be_empty) {
  Json j = ExtractFencedJson(reply);
  if (!j.is_object()) return std::nullopt;
  for (std::string_view f : required) {
    const std::string key(f);
    if (!j.contains(key) || !j[key].is_string()) return std::nullopt;
    const bool optional =
        std::find(may_be_empty.begin(), may_be_empty.end(), f) != may_be_empty.end();
    if (!optional && Trimmed(j[key].get<std::string>()).empty()) return std::nullopt;
  }
  return j;
}

std::vector<SeedText> SelectSeeds(std::span<const SeedText> pool, std::size_t count,
                                  uint64_t seed) {
  if (pool.empty()) throw UsageError("seed pool is empty");
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(DeriveSeed(seed, "pool:" + pool.front().pool));
  rng.Shuffle(std::span<std::size_t>(order));
  if (count > pool.size()) {
    std::cerr << "warning: pool '" << pool.front().pool << "' has " << pool.size()
              << " seeds for " << count << " requests; reusing seeds round-robin\n";
  }
  std::vector<SeedText> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(pool[order[i % order.size()]]);
  return out;
}

GenerateResult GenerateInstructionPairs(CompletionClient& client, const JobConfig& config,
                                        std::span<const ModelRef> models,
                                        std::span<const SeedText> pool_a,
                                        std::span<const SeedText> pool_b, int n,
                                        uint64_t seed) {
  if (n <= 0 || n % 2 != 0) throw UsageError("n must be even and positive");
  if (pool_a.empty() || pool_b.empty()) throw UsageError("both seed pools must be non-empty");
  if (models.empty()) throw UsageError("no models given");
  const PromptTemplate prompt = config.prompt.value_or(PromptTemplate::Builtin(JobKind::kGenerate));
  for (const ModelRef& m : models) BaseRequest(config, m, JobKind::kGenerate, prompt);

  std::vector<SeedText> seeds = SelectSeeds(pool_a, n / 2, seed);
  const std::vector<SeedText> b = SelectSeeds(pool_b, n / 2, seed);
  seeds.insert(seeds.end(), b.begin(), b.end());

  struct Task {
    const ModelRef* model;
    const SeedText* seed;
  };
  std::vector<Task> tasks;
  for (const ModelRef& m : models) {
    for (const SeedText& s : seeds) tasks.push_back({&m, &s});
  }

  static constexpr std::string_view kFields[] = {"question", "answer"};
  std::vector<Attempt> attempts(tasks.size());
  ParallelFor(tasks.size(), config.workers, [&](std::size_t i) {
    GenRequest req = BaseRequest(config, *tasks[i].model, JobKind::kGenerate, prompt);
    Json payload;
    payload["seed_text"] = tasks[i].seed->text;
    req.user = prompt.Render(payload);
    attempts[i] = RequestStructured(client, std::move(req), kFields, {},
                                    [](const Json&) { return std::string(); });
  });

  GenerateResult result;
  result.report.job = "generate";
  result.report.input = tasks.size();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Attempt& a = attempts[i];
    if (a.repaired) ++result.report.repairs;
    if (a.outcome == Outcome::kOk) {
      result.pairs.push_back({tasks[i].seed->id, tasks[i].model->name,
                              a.value["question"].get<std::string>(),
                              a.value["answer"].get<std::string>()});
      ++result.report.output;
    } else {
      ++result.report.dropped;
      result.report.log.push_back("dropped " + tasks[i].model->ToString() + " seed " +
                                  tasks[i].seed->id + ": " + a.error);
    }
  }
  return result;
}

TranslateResult TranslateInstructionDataset(CompletionClient& client, const JobConfig& config,
                                            std::span<const SourcedInstruction> records) {
  const PromptTemplate prompt =
      config.prompt.value_or(PromptTemplate::Builtin(JobKind::kTranslate));
  static constexpr std::string_view kFields[] = {"instruction", "context", "response"};
  static constexpr std::string_view kMayBeEmpty[] = {"context"};
  BaseRequest(config, config.model, JobKind::kTranslate, prompt);

  std::vector<Attempt> attempts(records.size());
  ParallelFor(records.size(), config.workers, [&](std::size_t i) {
    const InstructionRecord& en = records[i].record;
    GenRequest req = BaseRequest(config, config.model, JobKind::kTranslate, prompt);
    Json payload;
    payload["instruction"] = en.instruction;
    payload["context"] = en.context;
    payload["response"] = en.response;
    req.user = prompt.Render(payload);
    const bool has_context = !Trimmed(en.context).empty();
    attempts[i] = RequestStructured(
        client, std::move(req), kFields, kMayBeEmpty, [&](const Json& j) -> std::string {
          const bool got_context = !Trimmed(j["context"].get<std::string>()).empty();
          if (has_context && !got_context) return "context was not translated";
          return {};
        });
  });

  TranslateResult result;
  result.report.job = "translate";
  result.report.input = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Attempt& a = attempts[i];
    const SourcedInstruction& src = records[i];
    if (a.repaired) ++result.report.repairs;
    if (a.outcome != Outcome::kOk) {
      result.retries.push_back(src);
      ++result.report.retried;
      result.report.log.push_back("retry " + src.source_id + ": " + a.error);
      continue;
    }
    ParallelInstructionRecord rec;
    rec.source_id = src.source_id;
    rec.en = src.record;
    rec.en.lang = Lang::kEn;
    rec.ga.instruction = a.value["instruction"].get<std::string>();
    // An empty source context is never filled in, whatever the model said.
    rec.ga.context = Trimmed(src.record.context).empty() ? src.record.context
                                                          : a.value["context"].get<std::string>();
    rec.ga.response = a.value["response"].get<std::string>();
    rec.ga.category = src.record.category;
    rec.ga.lang = Lang::kGa;
    result.records.push_back(std::move(rec));
    ++result.report.output;
  }
  return result;
}

PreferenceResult GeneratePreferencePairs(CompletionClient& client, const JobConfig& config,
                                         std::span<const PromptResponse> records) {
  const PromptTemplate prompt =
      config.prompt.value_or(PromptTemplate::Builtin(JobKind::kPreference));
  static constexpr std::string_view kFields[] = {"prompt", "response_1", "response_2"};
  BaseRequest(config, config.model, JobKind::kPreference, prompt);
  for (const PromptResponse& r : records) {
    if (Trimmed(r.prompt).empty() || Trimmed(r.response).empty()) {
      throw ValidationError(0, "prompt", "empty prompt or response in record " + r.source_id);
    }
  }

  std::vector<Attempt> attempts(records.size());
  ParallelFor(records.size(), config.workers, [&](std::size_t i) {
    GenRequest req = BaseRequest(config, config.model, JobKind::kPreference, prompt);
    Json payload;
    payload["prompt"] = records[i].prompt;
    payload["response"] = records[i].response;
    req.user = prompt.Render(payload);
    attempts[i] =
        RequestStructured(client, std::move(req), kFields, {}, [](const Json& j) -> std::string {
          if (Trimmed(j["response_1"].get<std::string>()) ==
              Trimmed(j["response_2"].get<std::string>())) {
            return "response_1 and response_2 are identical";
          }
          return {};
        });
  });

  PreferenceResult result;
  result.report.job = "preference";
  result.report.input = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Attempt& a = attempts[i];
    if (a.repaired) ++result.report.repairs;
    if (a.outcome != Outcome::kOk) {
      result.retries.push_back(records[i]);
      ++result.report.retried;
      result.report.log.push_back("retry " + records[i].source_id + ": " + a.error);
      continue;
    }
    PreferencePair p;
    p.prompt_ga = a.value["prompt"].get<std::string>();
    p.accepted_ga = a.value["response_1"].get<std::string>();
    p.rejected_ga = a.value["response_2"].get<std::string>();
    p.source_id = records[i].source_id;
    p.intended = "accepted";
    result.pairs.push_back(std::move(p));
    ++result.report.output;
  }
  return result;
}

Json SourcedInstructionToJson(const SourcedInstruction& r) {
  Json j = RecordSchema<InstructionRecord>::ToJson(r.record);
  j["source_id"] = r.source_id;
  return j;
}

std::vector<SourcedInstruction> ReadSourcedInstructions(const std::string& path) {
  std::vector<SourcedInstruction> out;
  JsonLinesReader reader(path);
  while (auto j = reader.Next()) {
    SourcedInstruction s;
    s.record = RecordSchema<InstructionRecord>::FromJson(*j, reader.line());
    s.source_id = field::OptionalString(*j, "source_id", reader.line());
    if (s.source_id.empty()) s.source_id = "row-" + std::to_string(out.size());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace glor::synth
