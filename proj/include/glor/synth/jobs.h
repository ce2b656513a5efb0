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
#ifndef GLOR_SYNTH_JOBS_H_
#define GLOR_SYNTH_JOBS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/records.h"
#include "glor/core/types.h"
#include "glor/synth/client.h"

namespace glor::synth {

enum class JobKind { kGenerate, kTranslate, kPreference };
std::string_view JobName(JobKind kind);

// System and user prompt text. The user template must contain {{payload}},
// which is replaced by the job input as a fenced json block.
struct PromptTemplate {
  std::string system;
  std::string user;

  std::string Version() const;
  std::string Render(const Json& payload) const;

  static PromptTemplate Builtin(JobKind kind);
  // Reads <dir>/<job>.system.txt and <dir>/<job>.user.txt.
  static PromptTemplate Load(const std::string& dir, JobKind kind);
};

// "provider:model", e.g. "google:gemini-2.5-pro". A bare name uses mock.
struct ModelRef {
  ProviderKind provider = ProviderKind::kMock;
  std::string name;

  static ModelRef Parse(std::string_view spec);
  std::string ToString() const;
};

struct JobConfig {
  ModelRef model;
  // Defaults: 0 for translation and preference jobs, 0.7 for generation.
  std::optional<double> temperature;
  int max_tokens = 2048;
  std::string key_ref;
  int workers = 4;
  std::optional<PromptTemplate> prompt;
};

// Accounting for one job. Every input ends up in exactly one of output,
// retried (written to the retry file) or dropped (logged).
struct JobReport {
  std::string job;
  uint64_t input = 0;
  uint64_t output = 0;
  uint64_t retried = 0;
  uint64_t dropped = 0;
  uint64_t repairs = 0;  // second attempts with a repair instruction
  std::vector<std::string> log;

  bool Conserved() const { return input == output + retried + dropped; }
  uint64_t shortfall() const { return input - output; }
  Json ToJson() const;
};

// Input record with its dataset row key.
struct SourcedInstruction {
  std::string source_id;
  InstructionRecord record;
};

// Strict parse of a structured reply: a json object whose required fields are
// all strings, non-empty unless listed in may_be_empty.
std::optional<Json> ParseStructured(std::string_view reply,
                                    std::span<const std::string_view> required,
                                    std::span<const std::string_view> may_be_empty = {});

// Picks count seeds from a pool: a seeded shuffle of the pool taken in order,
// wrapping round-robin (with a warning) when count exceeds the pool.
std::vector<SeedText> SelectSeeds(std::span<const SeedText> pool, std::size_t count,
                                  uint64_t seed);

struct GenerateResult {
  std::vector<QAPair> pairs;
  JobReport report;
};

// For every model, n/2 question-answer pairs seeded from each pool. Every
// model sees the same seeds. Throws UsageError unless n is even and positive
// and both pools are non-empty.
GenerateResult GenerateInstructionPairs(CompletionClient& client, const JobConfig& config,
                                        std::span<const ModelRef> models,
                                        std::span<const SeedText> pool_a,
                                        std::span<const SeedText> pool_b, int n,
                                        uint64_t seed);

struct TranslateResult {
  std::vector<ParallelInstructionRecord> records;
  std::vector<SourcedInstruction> retries;
  JobReport report;
};

// Field-wise translation into Irish. Empty English context stays empty.
// Failures are routed to retries, never dropped.
TranslateResult TranslateInstructionDataset(CompletionClient& client, const JobConfig& config,
                                            std::span<const SourcedInstruction> records);

struct PreferenceResult {
  std::vector<PreferencePair> pairs;
  std::vector<PromptResponse> retries;
  JobReport report;
};

// Irish prompt plus a good (accepted) and a deliberately poor (rejected)
// translation of the response. Identical responses trigger one re-request.
PreferenceResult GeneratePreferencePairs(CompletionClient& client, const JobConfig& config,
                                         std::span<const PromptResponse> records);

Json SourcedInstructionToJson(const SourcedInstruction& r);
std::vector<SourcedInstruction> ReadSourcedInstructions(const std::string& path);

}  // namespace glor::synth

#endif  // GLOR_SYNTH_JOBS_H_
