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
#ifndef GLOR_ARENA_ARENA_H_
#define GLOR_ARENA_ARENA_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/records.h"
#include "glor/core/types.h"
#include "glor/stats/agreement.h"

namespace glor::arena {

enum class Mode { kGeneration, kPreferenceValidation };
std::string_view ModeName(Mode mode);  // "generation-arena", "preference-validation"
Mode ParseMode(std::string_view name);

// Question shown to annotators, per mode.
std::string_view QuestionFor(Mode mode);

// Canonical names used as the two sides of a preference-validation item.
inline constexpr std::string_view kAccepted = "accepted";
inline constexpr std::string_view kRejected = "rejected";

struct Comparison {
  std::string key;
  Mode mode = Mode::kGeneration;
  std::string seed_ref;
  // Seed text (generation) or the Irish prompt (preference validation).
  std::string context;
  // Hidden from annotators.
  std::string model_a;
  std::string model_b;
  bool display_swap = false;
  std::string intended;  // preference validation only
  // Shown to annotators. Generation: {question, answer}; preference: {response}.
  Json payload_a;
  Json payload_b;

  // Full record including the hidden fields.
  Json ToJson() const;
  static Comparison FromJson(const Json& j, std::size_t line = 0);

  // What an annotator may see: key, mode, context, question and the two
  // payloads in display order. Never model names or the intended label.
  Json AnnotatorView() const;

  // Canonical model chosen by a displayed choice.
  const std::string& Resolve(stats::Choice choice) const;
};

// stable_key(mode, model_a, model_b, seed_ref). occurrence > 0 appends
// "#<occurrence>" to seed_ref, for seeds reused within one model pair.
std::string ComparisonKey(Mode mode, std::string_view model_a, std::string_view model_b,
                          std::string_view seed_ref, int occurrence = 0);

// Replaces case-insensitive occurrences of any name with "[model]".
std::string RedactNames(std::string_view text, std::span<const std::string> names);

// Annotator-visible strings that contain a model name (case-insensitive).
// Empty when the set is anonymous.
std::vector<std::string> FindNameLeaks(std::span<const Comparison> comparisons,
                                       std::span<const std::string> names);

struct ScheduleOptions {
  int per_pair = 8;
  uint64_t seed = 0;
};

// C(k,2) * per_pair comparisons. Seed usage alternates between the pools;
// each pool is restricted to seeds that have generations, visited in a
// seeded order and reused round-robin (with a warning) once exhausted.
// Throws UsageError for fewer than two models, per_pair < 1 or an empty
// pool, and NotFoundError listing every missing (model, seed) generation.
std::vector<Comparison> SchedulePairs(std::span<const std::string> models,
                                      std::span<const SeedText> pool_a,
                                      std::span<const SeedText> pool_b,
                                      std::span<const QAPair> generations,
                                      const ScheduleOptions& options);

// sample_n preference pairs drawn without replacement, shown as anonymous
// A/B with a seeded swap. Throws UsageError when sample_n exceeds the pairs.
std::vector<Comparison> BuildPreferenceValidation(std::span<const PreferencePair> pairs,
                                                  std::size_t sample_n, uint64_t seed);

void WriteComparisons(const std::string& path, std::span<const Comparison> comparisons);
std::vector<Comparison> ReadComparisons(const std::string& path);

}  // namespace glor::arena

#endif  // GLOR_ARENA_ARENA_H_
